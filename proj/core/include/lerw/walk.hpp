#ifndef LERW_WALK_HPP
#define LERW_WALK_HPP

#include <cstdint>
#include <vector>

#include "lerw/lattice.hpp"
#include "lerw/rng.hpp"

namespace lerw {

// Hard cap on simple random walk length. Exceeding it signals a defect
// (a buggy stopping rule, never a sample to truncate).
inline constexpr uint64_t kStepCap = 1'000'000'000ull;

struct LatticePath {
    std::vector<LatticePoint> points;

    size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
    bool is_nearest_neighbor() const;
    bool is_self_avoiding() const;
};

// Reversed loop-erasure of a simple random walk: `path` runs from the exit
// point to the origin, `steps` is M_n, `srw_steps` the lifetime tau of the
// generating walk.
struct LerwSample {
    LatticePath path;
    uint64_t steps = 0;
    uint64_t srw_steps = 0;
};

// SRW from the origin stopped the first time |S| >= n.
LatticePath sample_srw_to_radius(int32_t n, RngStream& rng);

// SRW from the origin stopped on first entry into dom's boundary set.
LatticePath sample_srw_in_domain(const GridDomain& dom, RngStream& rng);

// Chronological loop erasure LE(S); one pass with a point -> last-index map.
LatticePath loop_erase(const LatticePath& path);

// RLE(S) = rev(LE(rev(S))).
LatticePath reverse_loop_erase(const LatticePath& path);

LerwSample sample_lerw(int32_t n, RngStream& rng);
LerwSample sample_lerw(const GridDomain& dom, RngStream& rng);

// Reusable-buffer sampler for tight Monte Carlo loops. Not thread-safe;
// use one instance per worker.
class LerwSampler {
  public:
    // Walk to |S| >= n, then erase the reversed walk. Returns the erased
    // path from the exit point to the origin.
    const std::vector<LatticePoint>& sample_ball(int32_t n, RngStream& rng);

    // Same with the walk stopped on dom's boundary set.
    const std::vector<LatticePoint>& sample_domain(const GridDomain& dom,
                                                   RngStream& rng);

    // Plain SRW into an internal buffer (kept separate from the LERW buffer
    // so intersection tests can use both).
    const std::vector<LatticePoint>& sample_walk_ball(int32_t n,
                                                      RngStream& rng);

    const std::vector<LatticePoint>& path() const { return erased_; }
    const std::vector<LatticePoint>& walk() const { return walk_; }
    uint64_t srw_steps() const { return walk_.empty() ? 0 : walk_.size() - 1; }

  private:
    void ensure_box(int32_t min_x, int32_t max_x, int32_t min_y, int32_t max_y);
    size_t cell(LatticePoint p) const {
        return size_t(p.x - min_x_) * stride_ + size_t(p.y - min_y_);
    }
    void bump_epoch();
    void erase_reversed_walk();

    std::vector<LatticePoint> walk_;
    std::vector<LatticePoint> aux_walk_;
    std::vector<LatticePoint> erased_;
    std::vector<int32_t> last_;
    std::vector<uint32_t> stamp_;
    uint32_t epoch_ = 0;
    int32_t min_x_ = 0, max_x_ = -1, min_y_ = 0, max_y_ = -1;
    size_t stride_ = 0;
};

} // namespace lerw

#endif
