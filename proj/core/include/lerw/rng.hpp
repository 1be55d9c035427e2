#ifndef LERW_RNG_HPP
#define LERW_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace lerw {

// Philox 4x32-10 counter-based generator (Salmon et al., SC 2011).
// A stream is fully determined by (seed, stream_index), so replicas can be
// assigned disjoint stream indices and produce the same numbers regardless
// of how work is scheduled across threads.
class RngStream {
  public:
    RngStream(uint64_t seed, uint64_t stream_index)
        : seed_(seed), stream_(stream_index) {}

    uint64_t seed() const { return seed_; }
    uint64_t stream_index() const { return stream_; }

    uint32_t next_u32() {
        if (pos_ == 4) refill();
        return block_[pos_++];
    }

    uint64_t next_u64() {
        uint64_t lo = next_u32();
        uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform double in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform direction in {0,1,2,3}; consumes 2 bits.
    uint32_t next_direction() {
        if (dir_bits_left_ == 0) {
            dir_bits_ = next_u64();
            dir_bits_left_ = 32;
        }
        uint32_t d = static_cast<uint32_t>(dir_bits_ & 3u);
        dir_bits_ >>= 2;
        --dir_bits_left_;
        return d;
    }

    // Standard normal via the Marsaglia polar method.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // One keyed Philox block; exposed for known-answer tests.
    static std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                              std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            ctr = philox_round(ctr, key);
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

  private:
    void refill() {
        std::array<uint32_t, 4> ctr = {
            static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32),
            static_cast<uint32_t>(block_index_),
            static_cast<uint32_t>(block_index_ >> 32)};
        std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed_),
                                       static_cast<uint32_t>(seed_ >> 32)};
        block_ = philox4x32(ctr, key);
        ++block_index_;
        pos_ = 0;
    }

    static std::array<uint32_t, 4> philox_round(const std::array<uint32_t, 4>& c,
                                                const std::array<uint32_t, 2>& k) {
        uint64_t p0 = 0xD2511F53ull * c[0];
        uint64_t p1 = 0xCD9E8D57ull * c[2];
        uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
        uint32_t lo0 = static_cast<uint32_t>(p0);
        uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
        uint32_t lo1 = static_cast<uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }

    uint64_t seed_;
    uint64_t stream_;
    uint64_t block_index_ = 0;
    std::array<uint32_t, 4> block_ = {0, 0, 0, 0};
    int pos_ = 4;
    uint64_t dir_bits_ = 0;
    int dir_bits_left_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace lerw

#endif
