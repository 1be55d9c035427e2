#ifndef LERW_ESTIMATORS_HPP
#define LERW_ESTIMATORS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "lerw/green.hpp"
#include "lerw/lattice.hpp"
#include "lerw/loewner.hpp"
#include "lerw/stats.hpp"
#include "lerw/walk.hpp"

namespace lerw {

// Replica r of sub-experiment `tag` draws from stream (tag << 40) | r, so
// every estimator in a composite run has its own disjoint stream range.
inline constexpr uint64_t kStreamTagShift = 40;
inline uint64_t tagged_stream(uint64_t tag, uint64_t replica) {
    return (tag << kStreamTagShift) | replica;
}

struct EstimateReport {
    double estimate = 0.0;
    double std_error = 0.0;
    uint64_t count = 0;
    uint64_t seed = 0;
};

// --- M_n moments, quantiles, tightness diagnostics -------------------------

struct MnEstimate {
    int32_t n = 0;
    uint64_t samples = 0;
    EstimateReport report; // mean of M_n
    double q50 = 0.0, q90 = 0.0, q99 = 0.0; // quantiles of M_n / mean
};

MnEstimate estimate_mn(int32_t n, uint64_t samples, uint64_t seed,
                       int workers, uint64_t stream_tag = 0);

// --- growth exponent fit ----------------------------------------------------

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double half_width = 0.0; // bootstrap confidence half-width of the slope
    std::vector<double> residuals;
};

ExponentFit fit_growth_exponent(
    const std::vector<std::pair<double, double>>& n_and_mean,
    uint64_t bootstrap_seed = 7, int bootstrap_rounds = 200);

// --- edge-visit probabilities vs the Green's function -----------------------

struct EdgeProbBin {
    double r_lo = 0.0, r_hi = 0.0;
    uint64_t edges = 0;      // edges with midpoint in the bin
    uint64_t hits = 0;       // total traversals over all samples
    double green_sum = 0.0;  // sum of G(z_e) over the bin's edges
    double scaled_ratio = 0.0; // (2n^2/c_n) P_hat summed / green_sum
};

struct EdgeProbResult {
    int32_t n = 0;
    uint64_t samples = 0;
    uint64_t seed = 0;
    bool empirical_speed = true;
    double c_n = 0.0;
    double mn_mean = 0.0;
    uint64_t total_edge_hits = 0; // equals sum of M_n exactly (identity)
    uint64_t mn_sum = 0;
    std::vector<EdgeProbBin> bins;
};

EdgeProbResult estimate_edge_probability(
    int32_t n, uint64_t samples,
    const std::vector<std::pair<double, double>>& bins, bool empirical_speed,
    SleParams params, uint64_t seed, int workers);

// --- conditional ball occupation (Theorem-4.1-style diagnostics) ------------

struct ConditionalOccRow {
    double eps = 0.0;
    int32_t eps_n = 0;        // eps * n rounded to the lattice
    uint64_t hits = 0;
    double hit_rate = 0.0;
    double cond_mean_steps = 0.0; // E[#edges in ball | ball visited]
    double cond_std_error = 0.0;
    double m_eps_mean = 0.0;      // companion estimate of E[M_{eps n}]
    double ratio_to_m_eps = 0.0;  // (a) / E[M_{eps n}]
    double ratio_scaled = 0.0;    // measure ratio against E[M_eps]/E[M_n]
    double bound_quotient = 0.0;  // (a) / (log(1/eps) E[M_{eps n}])
};

struct ConditionalOccResult {
    Complex z;
    int32_t n = 0;
    uint64_t samples = 0;
    uint64_t seed = 0;
    double mn_mean = 0.0;
    double c_n = 0.0;
    std::vector<ConditionalOccRow> rows;
};

ConditionalOccResult estimate_conditional_occupation(
    Complex z, const std::vector<double>& eps_list, int32_t n,
    uint64_t samples, uint64_t seed, int workers, bool empirical_speed = true,
    uint64_t min_hits = 100, bool enforce_disk_containment = true);

// --- escape probabilities ----------------------------------------------------

// Es(n): SRW to dB_n and an independent LERW to dB_n, both without their
// common starting point, are disjoint.
EstimateReport estimate_es(int32_t n, uint64_t samples, uint64_t seed,
                           int workers);

// Es(m,n): the LERW is replaced by its portion from the first exit of B_m on.
EstimateReport estimate_es2(int32_t m, int32_t n, uint64_t samples,
                            uint64_t seed, int workers);

struct EsScalingRow {
    double eps = 0.0;
    int32_t m = 0;
    EstimateReport report;
};

struct EsScalingResult {
    int32_t n = 0;
    std::vector<EsScalingRow> rows;
    double fitted_exponent = 0.0; // slope of log Es(eps n, n) vs log eps
};

EsScalingResult es_scaling(int32_t n, const std::vector<double>& eps_list,
                           uint64_t samples, uint64_t seed, int workers);

// --- ball-hitting probabilities ---------------------------------------------

EstimateReport estimate_hit_probability(Complex z, double eps, int32_t n,
                                        uint64_t samples, uint64_t seed,
                                        int workers);

// Companion statistic on radial SLE(kappa) traces for cross-model checks.
EstimateReport sle_hit_probability(Complex z, double eps, double kappa,
                                   double T, double dt, uint64_t samples,
                                   uint64_t seed, int workers,
                                   const TraceOptions& opt = {});

// --- domain Markov property test ---------------------------------------------

struct DomainMarkovResult {
    std::vector<LatticePoint> prefix; // conditioning prefix alpha
    uint64_t prefix_count = 0;
    uint64_t comparator_count = 0;
    ChiSquareResult chi;
};

// Chi-square comparison of (i) LERW remainders conditioned on the most
// common length-j prefix versus (ii) fresh LERW in dom minus the prefix,
// conditioned to start at the prefix tip. `wrong_comparator` deliberately
// skips the domain slitting (negative control).
DomainMarkovResult domain_markov_test(const GridDomain& dom, size_t j,
                                      uint64_t samples, uint64_t seed,
                                      int workers,
                                      bool wrong_comparator = false,
                                      uint64_t min_prefix_count = 500);

} // namespace lerw

#endif
