#include "lerw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <string>
#include <unordered_map>

#include "lerw/errors.hpp"
#include "lerw/parallel.hpp"

namespace lerw {

namespace {

// Stamped point-set marker over a lattice box, reset in O(1) per use.
class PointMarker {
  public:
    void ensure(int32_t min_x, int32_t max_x, int32_t min_y, int32_t max_y) {
        bool empty = max_x_ < min_x_;
        if (!empty && min_x >= min_x_ && max_x <= max_x_ && min_y >= min_y_ &&
            max_y <= max_y_)
            return;
        if (empty) {
            min_x_ = min_x;
            max_x_ = max_x;
            min_y_ = min_y;
            max_y_ = max_y;
        } else {
            min_x_ = std::min(min_x_, min_x);
            max_x_ = std::max(max_x_, max_x);
            min_y_ = std::min(min_y_, min_y);
            max_y_ = std::max(max_y_, max_y);
        }
        stride_ = size_t(max_y_ - min_y_) + 1;
        stamp_.assign((size_t(max_x_ - min_x_) + 1) * stride_, 0);
        epoch_ = 0;
    }
    void begin() {
        if (epoch_ == UINT32_MAX) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            epoch_ = 0;
        }
        ++epoch_;
    }
    void mark(LatticePoint p) { stamp_[cell(p)] = epoch_; }
    bool marked(LatticePoint p) const { return stamp_[cell(p)] == epoch_; }

  private:
    size_t cell(LatticePoint p) const {
        return size_t(p.x - min_x_) * stride_ + size_t(p.y - min_y_);
    }
    std::vector<uint32_t> stamp_;
    uint32_t epoch_ = 0;
    int32_t min_x_ = 0, max_x_ = -1, min_y_ = 0, max_y_ = -1;
    size_t stride_ = 0;
};

double sample_std_error(uint64_t sum, uint64_t sumsq, uint64_t n) {
    if (n < 2) return 0.0;
    double mean = double(sum) / double(n);
    double var =
        (double(sumsq) - double(n) * mean * mean) / double(n - 1);
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / double(n));
}

double bernoulli_std_error(uint64_t successes, uint64_t n) {
    if (n < 2) return 0.0;
    double p = double(successes) / double(n);
    return std::sqrt(p * (1.0 - p) / double(n));
}

double segment_dist2(double px, double py, double ax, double ay, double bx,
                     double by) {
    double ux = bx - ax, uy = by - ay;
    double len2 = ux * ux + uy * uy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((px - ax) * ux + (py - ay) * uy) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    double dx = px - (ax + t * ux), dy = py - (ay + t * uy);
    return dx * dx + dy * dy;
}

} // namespace

// --- estimate_mn -------------------------------------------------------------

MnEstimate estimate_mn(int32_t n, uint64_t samples, uint64_t seed, int workers,
                       uint64_t stream_tag) {
    if (n < 1) throw PreconditionError("estimate_mn: n must be >= 1");
    if (samples < 1) throw PreconditionError("estimate_mn: samples must be >= 1");

    struct Block {
        uint64_t sum = 0;
        uint64_t sumsq = 0;
        std::vector<uint64_t> hist;
    };
    uint64_t sum = 0, sumsq = 0;
    std::vector<uint64_t> hist;

    run_blocks<Block>(
        samples, workers,
        [&](uint64_t, uint64_t lo, uint64_t hi) {
            static thread_local LerwSampler sampler;
            Block blk;
            for (uint64_t r = lo; r < hi; ++r) {
                RngStream rng(seed, tagged_stream(stream_tag, r));
                const auto& path = sampler.sample_ball(n, rng);
                uint64_t m = path.size() - 1;
                blk.sum += m;
                blk.sumsq += m * m;
                if (m >= blk.hist.size()) blk.hist.resize(m + 1, 0);
                ++blk.hist[m];
            }
            return blk;
        },
        [&](uint64_t, Block&& blk) {
            sum += blk.sum;
            sumsq += blk.sumsq;
            if (blk.hist.size() > hist.size()) hist.resize(blk.hist.size(), 0);
            for (size_t i = 0; i < blk.hist.size(); ++i) hist[i] += blk.hist[i];
        });

    MnEstimate out;
    out.n = n;
    out.samples = samples;
    out.report.estimate = double(sum) / double(samples);
    out.report.std_error = sample_std_error(sum, sumsq, samples);
    out.report.count = samples;
    out.report.seed = seed;
    double mean = out.report.estimate;
    out.q50 = histogram_quantile(hist, 0.50) / mean;
    out.q90 = histogram_quantile(hist, 0.90) / mean;
    out.q99 = histogram_quantile(hist, 0.99) / mean;
    return out;
}

// --- fit_growth_exponent ------------------------------------------------------

ExponentFit fit_growth_exponent(
    const std::vector<std::pair<double, double>>& n_and_mean,
    uint64_t bootstrap_seed, int bootstrap_rounds) {
    std::vector<double> xs, ys;
    for (auto [n, mean] : n_and_mean) {
        if (!(n > 0.0) || !(mean > 0.0))
            throw PreconditionError("fit_growth_exponent: need positive data");
        xs.push_back(std::log(n));
        ys.push_back(std::log(mean));
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    if (distinct.size() < 3)
        throw DegenerateFit("fit_growth_exponent: need >= 3 distinct n");

    LineFit base = least_squares(xs, ys);
    ExponentFit out;
    out.slope = base.slope;
    out.intercept = base.intercept;
    out.residuals = base.residuals;

    // residual bootstrap for the slope's confidence half-width
    RngStream rng(bootstrap_seed, 0);
    std::vector<double> slopes;
    slopes.reserve(size_t(bootstrap_rounds));
    std::vector<double> yb(ys.size());
    for (int round = 0; round < bootstrap_rounds; ++round) {
        for (size_t i = 0; i < ys.size(); ++i) {
            size_t pick = size_t(rng.next_u64() % out.residuals.size());
            yb[i] = (base.intercept + base.slope * xs[i]) +
                    out.residuals[pick];
        }
        slopes.push_back(least_squares(xs, yb).slope);
    }
    double mean = 0.0;
    for (double s : slopes) mean += s;
    mean /= double(slopes.size());
    double var = 0.0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    var /= double(slopes.size() > 1 ? slopes.size() - 1 : 1);
    out.half_width = 1.96 * std::sqrt(var);
    return out;
}

// --- estimate_edge_probability -------------------------------------------------

EdgeProbResult estimate_edge_probability(
    int32_t n, uint64_t samples,
    const std::vector<std::pair<double, double>>& bins, bool empirical_speed,
    SleParams params, uint64_t seed, int workers) {
    if (n < 1) throw PreconditionError("estimate_edge_probability: n >= 1");
    if (bins.empty())
        throw PreconditionError("estimate_edge_probability: no bins");
    for (auto [lo, hi] : bins) {
        if (!(0.0 < lo && lo < hi))
            throw PreconditionError("estimate_edge_probability: bad bin");
    }

    const int32_t w = 2 * n + 3; // box [-n-1, n+1]
    const size_t ncells = size_t(w) * size_t(w);
    auto cell = [n, w](int32_t x, int32_t y) {
        return size_t(x + n + 1) * size_t(w) + size_t(y + n + 1);
    };

    struct Accum {
        std::vector<uint32_t> counts;
        uint64_t mn_sum = 0;
    };
    Accum total = run_replicas_exact<Accum>(
        samples, workers,
        [&]() {
            Accum a;
            a.counts.assign(ncells * 2, 0);
            return a;
        },
        [&](Accum& acc, uint64_t r) {
            static thread_local LerwSampler sampler;
            RngStream rng(seed, r);
            const auto& pts = sampler.sample_ball(n, rng);
            acc.mn_sum += pts.size() - 1;
            for (size_t i = 1; i < pts.size(); ++i) {
                LatticePoint p = pts[i - 1], q = pts[i];
                size_t id;
                if (q.x == p.x + 1)
                    id = cell(p.x, p.y) * 2;
                else if (q.x == p.x - 1)
                    id = cell(q.x, q.y) * 2;
                else if (q.y == p.y + 1)
                    id = cell(p.x, p.y) * 2 + 1;
                else
                    id = cell(q.x, q.y) * 2 + 1;
                ++acc.counts[id];
            }
        },
        [](Accum& into, const Accum& from) {
            for (size_t i = 0; i < into.counts.size(); ++i)
                into.counts[i] += from.counts[i];
            into.mn_sum += from.mn_sum;
        });

    EdgeProbResult out;
    out.n = n;
    out.samples = samples;
    out.seed = seed;
    out.empirical_speed = empirical_speed;
    out.mn_sum = total.mn_sum;
    out.mn_mean = double(total.mn_sum) / double(samples);
    out.c_n = empirical_speed ? out.mn_mean : std::pow(double(n), 1.25);

    uint64_t grand_total = 0;
    for (uint32_t c : total.counts) grand_total += c;
    out.total_edge_hits = grand_total;

    out.bins.resize(bins.size());
    for (size_t b = 0; b < bins.size(); ++b) {
        out.bins[b].r_lo = bins[b].first;
        out.bins[b].r_hi = bins[b].second;
    }
    double inv_n = 1.0 / double(n);
    for (int32_t x = -n - 1; x <= n + 1; ++x) {
        for (int32_t y = -n - 1; y <= n + 1; ++y) {
            for (int dir = 0; dir < 2; ++dir) {
                double mx = (double(x) + (dir == 0 ? 0.5 : 0.0)) * inv_n;
                double my = (double(y) + (dir == 1 ? 0.5 : 0.0)) * inv_n;
                double r = std::hypot(mx, my);
                for (size_t b = 0; b < bins.size(); ++b) {
                    if (r < bins[b].first || r >= bins[b].second) continue;
                    auto& bin = out.bins[b];
                    ++bin.edges;
                    bin.hits += total.counts[cell(x, y) * 2 + dir];
                    // G is defined on the closed disk only
                    if (r <= 1.0) bin.green_sum += green_disk({mx, my}, params);
                }
            }
        }
    }
    double scale = 2.0 * double(n) * double(n) / (out.c_n * double(samples));
    for (auto& bin : out.bins) {
        if (bin.green_sum > 0.0)
            bin.scaled_ratio = scale * double(bin.hits) / bin.green_sum;
    }
    return out;
}

// --- estimate_conditional_occupation -------------------------------------------

ConditionalOccResult estimate_conditional_occupation(
    Complex z, const std::vector<double>& eps_list, int32_t n,
    uint64_t samples, uint64_t seed, int workers, bool empirical_speed,
    uint64_t min_hits, bool enforce_disk_containment) {
    if (n < 1) throw PreconditionError("conditional_occupation: n >= 1");
    if (eps_list.empty())
        throw PreconditionError("conditional_occupation: no eps values");
    for (double eps : eps_list) {
        if (!(eps > 0.0))
            throw PreconditionError("conditional_occupation: eps must be > 0");
        if (enforce_disk_containment && !(std::abs(z) + 2.0 * eps < 1.0))
            throw PreconditionError(
                "conditional_occupation: B(z, 2 eps) not inside the disk");
    }

    size_t ne = eps_list.size();
    std::vector<uint64_t> hits(ne, 0), steps(ne, 0), stepsq(ne, 0);
    uint64_t mn_sum = 0, mn_sumsq = 0;

    double zx = z.real() * double(n), zy = z.imag() * double(n);
    std::vector<double> rad2(ne);
    for (size_t e = 0; e < ne; ++e) {
        double r = eps_list[e] * double(n);
        rad2[e] = r * r;
    }

    struct FullBlock {
        std::vector<uint64_t> hits, steps, stepsq;
        uint64_t mn_sum = 0, mn_sumsq = 0;
    };
    run_blocks<FullBlock>(
        samples, workers,
        [&](uint64_t, uint64_t lo, uint64_t hi) {
            static thread_local LerwSampler sampler;
            FullBlock blk;
            blk.hits.assign(ne, 0);
            blk.steps.assign(ne, 0);
            blk.stepsq.assign(ne, 0);
            std::vector<uint64_t> in_ball(ne);
            for (uint64_t r = lo; r < hi; ++r) {
                RngStream rng(seed, r);
                const auto& pts = sampler.sample_ball(n, rng);
                uint64_t m = pts.size() - 1;
                blk.mn_sum += m;
                blk.mn_sumsq += m * m;
                std::fill(in_ball.begin(), in_ball.end(), 0);
                for (size_t i = 1; i < pts.size(); ++i) {
                    double mx = 0.5 * (double(pts[i - 1].x) + double(pts[i].x));
                    double my = 0.5 * (double(pts[i - 1].y) + double(pts[i].y));
                    double d2 = (mx - zx) * (mx - zx) + (my - zy) * (my - zy);
                    for (size_t e = 0; e < ne; ++e) {
                        if (d2 < rad2[e]) ++in_ball[e];
                    }
                }
                for (size_t e = 0; e < ne; ++e) {
                    if (in_ball[e] > 0) {
                        ++blk.hits[e];
                        blk.steps[e] += in_ball[e];
                        blk.stepsq[e] += in_ball[e] * in_ball[e];
                    }
                }
            }
            return blk;
        },
        [&](uint64_t, FullBlock&& blk) {
            for (size_t e = 0; e < ne; ++e) {
                hits[e] += blk.hits[e];
                steps[e] += blk.steps[e];
                stepsq[e] += blk.stepsq[e];
            }
            mn_sum += blk.mn_sum;
            mn_sumsq += blk.mn_sumsq;
        });

    ConditionalOccResult out;
    out.z = z;
    out.n = n;
    out.samples = samples;
    out.seed = seed;
    out.mn_mean = double(mn_sum) / double(samples);
    out.c_n = empirical_speed ? out.mn_mean : std::pow(double(n), 1.25);

    for (size_t e = 0; e < ne; ++e) {
        if (hits[e] < min_hits)
            throw InsufficientHits(
                "conditional_occupation: ball hit fewer than required times");
        ConditionalOccRow row;
        row.eps = eps_list[e];
        row.eps_n = int32_t(std::lround(eps_list[e] * double(n)));
        if (row.eps_n < 1) row.eps_n = 1;
        row.hits = hits[e];
        row.hit_rate = double(hits[e]) / double(samples);
        row.cond_mean_steps = double(steps[e]) / double(hits[e]);
        row.cond_std_error = sample_std_error(steps[e], stepsq[e], hits[e]);
        MnEstimate m_eps = estimate_mn(row.eps_n, samples, seed, workers,
                                       /*stream_tag=*/1 + e);
        row.m_eps_mean = m_eps.report.estimate;
        row.ratio_to_m_eps = row.cond_mean_steps / row.m_eps_mean;
        row.ratio_scaled = row.cond_mean_steps * out.mn_mean /
                           (out.c_n * row.m_eps_mean);
        row.bound_quotient = row.cond_mean_steps /
                             (std::log(1.0 / row.eps) * row.m_eps_mean);
        out.rows.push_back(row);
    }
    return out;
}

// --- escape probabilities --------------------------------------------------------

namespace {

struct EsBlock {
    uint64_t disjoint = 0;
};

// Walk point set is S[1..tau]; LERW point set drops its forward starting
// point (the stored terminal origin). `terminal_from` restricts the LERW to
// stored indices [0, terminal_from].
template <class TerminalFn>
EstimateReport es_run(int32_t n, uint64_t samples, uint64_t seed, int workers,
                      TerminalFn&& terminal_index) {
    uint64_t disjoint = 0;
    run_blocks<EsBlock>(
        samples, workers,
        [&](uint64_t, uint64_t lo, uint64_t hi) {
            static thread_local LerwSampler sampler;
            static thread_local PointMarker marker;
            marker.ensure(-n - 1, n + 1, -n - 1, n + 1);
            EsBlock blk;
            for (uint64_t r = lo; r < hi; ++r) {
                RngStream rng_lerw(seed, tagged_stream(0, 2 * r));
                RngStream rng_srw(seed, tagged_stream(0, 2 * r + 1));
                const auto& lerw = sampler.sample_ball(n, rng_lerw);
                const auto& walk = sampler.sample_walk_ball(n, rng_srw);
                marker.begin();
                for (size_t i = 1; i < walk.size(); ++i) marker.mark(walk[i]);
                size_t last = terminal_index(lerw);
                bool ok = true;
                for (size_t i = 0; i <= last && ok; ++i) {
                    if (marker.marked(lerw[i])) ok = false;
                }
                blk.disjoint += ok ? 1 : 0;
            }
            return blk;
        },
        [&](uint64_t, EsBlock&& blk) { disjoint += blk.disjoint; });

    EstimateReport rep;
    rep.estimate = double(disjoint) / double(samples);
    rep.std_error = bernoulli_std_error(disjoint, samples);
    rep.count = samples;
    rep.seed = seed;
    return rep;
}

} // namespace

EstimateReport estimate_es(int32_t n, uint64_t samples, uint64_t seed,
                           int workers) {
    if (n < 1) throw PreconditionError("estimate_es: n >= 1");
    return es_run(n, samples, seed, workers,
                  [](const std::vector<LatticePoint>& lerw) {
                      return lerw.size() - 2; // all but the terminal origin
                  });
}

EstimateReport estimate_es2(int32_t m, int32_t n, uint64_t samples,
                            uint64_t seed, int workers) {
    if (!(1 <= m && m < n)) throw PreconditionError("estimate_es2: 1 <= m < n");
    int64_t m2 = int64_t(m) * m;
    return es_run(n, samples, seed, workers,
                  [m2](const std::vector<LatticePoint>& lerw) {
                      // first forward index beyond B_m = last stored index of
                      // the terminal part
                      size_t last = 0;
                      for (size_t s = lerw.size(); s-- > 0;) {
                          if (lerw[s].norm2() > m2) {
                              last = s;
                              break;
                          }
                      }
                      return last;
                  });
}

EsScalingResult es_scaling(int32_t n, const std::vector<double>& eps_list,
                           uint64_t samples, uint64_t seed, int workers) {
    if (eps_list.size() < 2)
        throw PreconditionError("es_scaling: need >= 2 eps values");
    EsScalingResult out;
    out.n = n;
    std::vector<double> xs, ys;
    for (double eps : eps_list) {
        int32_t m = int32_t(std::lround(eps * double(n)));
        if (m < 1 || m >= n)
            throw PreconditionError("es_scaling: eps n out of range");
        EsScalingRow row;
        row.eps = eps;
        row.m = m;
        row.report = estimate_es2(m, n, samples, seed, workers);
        out.rows.push_back(row);
        xs.push_back(std::log(eps));
        ys.push_back(std::log(row.report.estimate));
    }
    out.fitted_exponent = least_squares(xs, ys).slope;
    return out;
}

// --- hit probabilities -------------------------------------------------------------

EstimateReport estimate_hit_probability(Complex z, double eps, int32_t n,
                                        uint64_t samples, uint64_t seed,
                                        int workers) {
    if (!(eps > 0.0)) throw PreconditionError("hit_probability: eps > 0");
    if (n < 1) throw PreconditionError("hit_probability: n >= 1");
    double zx = z.real() * double(n), zy = z.imag() * double(n);
    double r2 = eps * double(n) * eps * double(n);
    uint64_t hits = 0;
    struct Block {
        uint64_t hits = 0;
    };
    run_blocks<Block>(
        samples, workers,
        [&](uint64_t, uint64_t lo, uint64_t hi) {
            static thread_local LerwSampler sampler;
            Block blk;
            for (uint64_t r = lo; r < hi; ++r) {
                RngStream rng(seed, r);
                const auto& pts = sampler.sample_ball(n, rng);
                bool hit = false;
                for (size_t i = 1; i < pts.size() && !hit; ++i) {
                    hit = segment_dist2(zx, zy, pts[i - 1].x, pts[i - 1].y,
                                        pts[i].x, pts[i].y) < r2;
                }
                blk.hits += hit ? 1 : 0;
            }
            return blk;
        },
        [&](uint64_t, Block&& blk) { hits += blk.hits; });

    EstimateReport rep;
    rep.estimate = double(hits) / double(samples);
    rep.std_error = bernoulli_std_error(hits, samples);
    rep.count = samples;
    rep.seed = seed;
    return rep;
}

EstimateReport sle_hit_probability(Complex z, double eps, double kappa,
                                   double T, double dt, uint64_t samples,
                                   uint64_t seed, int workers,
                                   const TraceOptions& opt) {
    if (!(eps > 0.0)) throw PreconditionError("sle_hit_probability: eps > 0");
    double r2 = eps * eps;
    uint64_t hits = 0;
    struct Block {
        uint64_t hits = 0;
    };
    run_blocks<Block>(
        samples, workers,
        [&](uint64_t, uint64_t lo, uint64_t hi) {
            Block blk;
            for (uint64_t r = lo; r < hi; ++r) {
                RngStream rng(seed, tagged_stream(8, r));
                TraceApprox trace =
                    sample_sle_trace(kappa, T, dt, rng, opt, true);
                const auto& c = trace.curve;
                bool hit = false;
                for (size_t i = 1; i < c.vertices.size() && !hit; ++i) {
                    hit = segment_dist2(z.real(), z.imag(),
                                        c.vertices[i - 1].real(),
                                        c.vertices[i - 1].imag(),
                                        c.vertices[i].real(),
                                        c.vertices[i].imag()) < r2;
                }
                blk.hits += hit ? 1 : 0;
            }
            return blk;
        },
        [&](uint64_t, Block&& blk) { hits += blk.hits; });

    EstimateReport rep;
    rep.estimate = double(hits) / double(samples);
    rep.std_error = bernoulli_std_error(hits, samples);
    rep.count = samples;
    rep.seed = seed;
    return rep;
}

// --- domain Markov test -------------------------------------------------------------

namespace {

std::string encode_points(const std::vector<LatticePoint>& pts, size_t from,
                          size_t to) {
    std::string s;
    s.reserve((to - from) * 8);
    for (size_t i = from; i < to; ++i) {
        uint64_t key = pack_point(pts[i]);
        char buf[8];
        std::memcpy(buf, &key, 8);
        s.append(buf, 8);
    }
    return s;
}

std::vector<LatticePoint> decode_points(const std::string& s) {
    std::vector<LatticePoint> pts;
    for (size_t i = 0; i + 8 <= s.size(); i += 8) {
        uint64_t key;
        std::memcpy(&key, s.data() + i, 8);
        pts.push_back({int32_t(key >> 32), int32_t(key & 0xffffffffull)});
    }
    return pts;
}

using CountMap = std::unordered_map<std::string, uint64_t>;

void merge_counts(CountMap& into, const CountMap& from) {
    for (const auto& [k, v] : from) into[k] += v;
}

} // namespace

DomainMarkovResult domain_markov_test(const GridDomain& dom, size_t j,
                                      uint64_t samples, uint64_t seed,
                                      int workers, bool wrong_comparator,
                                      uint64_t min_prefix_count) {
    if (!dom.origin_inside())
        throw PreconditionError("domain_markov_test: origin not in domain");

    // Pass 1: tally full paths (prefix and remainder derive from the key).
    CountMap paths = run_replicas_exact<CountMap>(
        samples, workers, []() { return CountMap{}; },
        [&](CountMap& acc, uint64_t r) {
            static thread_local LerwSampler sampler;
            RngStream rng(seed, tagged_stream(0, r));
            const auto& pts = sampler.sample_domain(dom, rng);
            if (pts.size() < j + 1) return; // path shorter than the prefix
            ++acc[encode_points(pts, 0, pts.size())];
        },
        merge_counts);

    // most common prefix (ties broken lexicographically)
    std::map<std::string, uint64_t> prefix_counts;
    for (const auto& [key, cnt] : paths) {
        if (key.size() < (j + 1) * 8) continue;
        prefix_counts[key.substr(0, (j + 1) * 8)] += cnt;
    }
    std::string alpha;
    uint64_t alpha_count = 0;
    for (const auto& [p, c] : prefix_counts) {
        if (c > alpha_count) {
            alpha = p;
            alpha_count = c;
        }
    }
    if (alpha_count < min_prefix_count)
        throw PrefixTooRare("domain_markov_test: conditioning prefix too rare");
    std::vector<LatticePoint> prefix = decode_points(alpha);

    // conditional remainder counts (keyed from the prefix tip onward)
    std::map<std::string, uint64_t> cond;
    for (const auto& [key, cnt] : paths) {
        if (key.size() < (j + 1) * 8) continue;
        if (key.compare(0, (j + 1) * 8, alpha) != 0) continue;
        cond[key.substr(j * 8)] += cnt;
    }

    // Comparator domain: dom minus the prefix (tip included); its LERW
    // conditioned to exit at the tip has the law the Markov property
    // asserts for the remainder. The wrong comparator skips the slitting
    // and only conditions on the original exit point.
    LatticePoint tip = prefix[j];
    GridDomain comparator_dom = [&]() {
        if (wrong_comparator) return dom;
        std::vector<LatticePoint> verts;
        for (auto p : dom.vertices()) {
            bool removed = false;
            for (size_t i = 1; i <= j; ++i) {
                if (p == prefix[i]) removed = true;
            }
            if (!removed) verts.push_back(p);
        }
        return GridDomain(dom.scale(), std::move(verts));
    }();
    LatticePoint accept_at = wrong_comparator ? prefix[0] : tip;

    CountMap comp = run_replicas_exact<CountMap>(
        alpha_count, workers, []() { return CountMap{}; },
        [&](CountMap& acc, uint64_t r) {
            static thread_local LerwSampler sampler;
            RngStream rng(seed, tagged_stream(1, r));
            for (;;) {
                const auto& pts = sampler.sample_domain(comparator_dom, rng);
                if (pts.front() != accept_at) continue;
                if (wrong_comparator) {
                    if (pts.size() < j + 1) continue;
                    ++acc[encode_points(pts, j, pts.size())];
                } else {
                    ++acc[encode_points(pts, 0, pts.size())];
                }
                return;
            }
        },
        merge_counts);

    std::map<std::string, uint64_t> comp_sorted(comp.begin(), comp.end());

    // align outcome cells
    std::vector<std::string> keys;
    for (const auto& [k, c] : cond) keys.push_back(k);
    for (const auto& [k, c] : comp_sorted) {
        if (!cond.count(k)) keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    std::vector<uint64_t> a, b;
    for (const auto& k : keys) {
        auto ia = cond.find(k);
        a.push_back(ia == cond.end() ? 0 : ia->second);
        auto ib = comp_sorted.find(k);
        b.push_back(ib == comp_sorted.end() ? 0 : ib->second);
    }

    DomainMarkovResult out;
    out.prefix = prefix;
    out.prefix_count = alpha_count;
    out.comparator_count = alpha_count;
    out.chi = two_sample_chi_square(a, b);
    return out;
}

} // namespace lerw
