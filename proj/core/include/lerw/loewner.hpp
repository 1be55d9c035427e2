#ifndef LERW_LOEWNER_HPP
#define LERW_LOEWNER_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "lerw/curve.hpp"
#include "lerw/green.hpp"
#include "lerw/rng.hpp"

namespace lerw {

// |xi(t) - g_t(z)| below this marks z as absorbed into the hull.
inline constexpr double kBlowupTol = 1e-6;
// Trace extraction radius 1 - kTraceOffset standing in for r -> 1-.
inline constexpr double kTraceOffset = 1e-3;

// Unimodular driving function xi(t) = exp(i B(kappa t)) sampled on a uniform
// grid; held constant within each step by the solver.
struct DrivingFunction {
    double kappa = 2.0;
    double dt = 1e-3;
    std::vector<double> theta; // angles at t_k = k dt
    uint64_t seed = 0;
    uint64_t stream_index = 0;
    bool uniform_start = false;

    size_t steps() const { return theta.empty() ? 0 : theta.size() - 1; }
    double horizon() const { return dt * double(steps()); }
    Complex xi(size_t k) const { return std::polar(1.0, theta[k]); }
};

DrivingFunction sample_driving(double kappa, double T, double dt,
                               RngStream& rng, bool uniform_start);
DrivingFunction constant_driving(double T, double dt, double theta0);

struct RadialTrajectory {
    double dt = 0.0;
    std::vector<Complex> values; // g_{t_k}(z), k = 0 .. values.size()-1
    bool blown_up = false;
    double blowup_time = std::numeric_limits<double>::infinity();
};

// Radial Loewner chain driven by a piecewise-constant driving function.
// Each step applies the exact map for a radial slit grown over one dt, so
// the scheme is stable at the singularity and capacity is exact per step.
class LoewnerChain {
  public:
    explicit LoewnerChain(DrivingFunction driving);

    const DrivingFunction& driving() const { return driving_; }

    // g_t(z) trajectory on the driving grid, truncated at blow-up.
    RadialTrajectory solve(Complex z) const;

    // g at step `k` of one point; `blown` set if absorbed before then.
    Complex map_forward(Complex z, size_t k, bool& blown) const;

    // g_{t_k}^{-1}(w) by composing the exact inverse slit maps.
    Complex map_inverse(Complex w, size_t k) const;

    // Same inverse by integrating the reversed ODE with RK4 substeps;
    // kept as an independent cross-check of map_inverse.
    Complex map_inverse_backward_flow(Complex w, size_t k,
                                      int substeps = 4) const;

  private:
    DrivingFunction driving_;
    std::vector<Complex> xi_;
    double exp_dt_;
    double exp_neg_dt_;
};

struct TraceOptions {
    double offset = kTraceOffset; // evaluate g^{-1} at (1-offset) xi(t)
    size_t stride = 8;            // trace sample every `stride` solver steps
    bool finite_lifetime = true;  // apply the t/(1-t) clock, endpoint 0 at 1
};

struct TraceApprox {
    enum class Tag { Capacity, FiniteLifetime };
    Curve curve;
    Tag tag = Tag::FiniteLifetime;
};

TraceApprox trace_from_driving(const DrivingFunction& driving,
                               const TraceOptions& opt = {});
TraceApprox sample_sle_trace(double kappa, double T, double dt, RngStream& rng,
                             const TraceOptions& opt = {},
                             bool uniform_start = true);

struct MartingaleSeries {
    std::vector<double> times;
    std::vector<double> values; // |g_t'(z)|^{2-d} G(g_t(z))
    bool blown_up = false;
    double blowup_time = std::numeric_limits<double>::infinity();
};

// The Green's-function observable along the chain; g' by centered
// differences with the given step.
MartingaleSeries martingale_observable(const LoewnerChain& chain, Complex z,
                                       SleParams params,
                                       double diff_step = 1e-5);

} // namespace lerw

#endif
