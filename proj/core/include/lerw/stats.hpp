#ifndef LERW_STATS_HPP
#define LERW_STATS_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace lerw {

// Kahan-compensated accumulator; merging partial sums in a fixed order keeps
// parallel reductions bit-identical across worker counts.
class CompensatedSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution with `dof` degrees.
double chi_square_sf(double x, double dof);

// Two-sample chi-square homogeneity test over matching count vectors.
// Cells whose pooled expected count falls below `min_expected` are merged
// into one overflow cell.
struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    size_t cells_used = 0;
};
ChiSquareResult two_sample_chi_square(const std::vector<uint64_t>& a,
                                      const std::vector<uint64_t>& b,
                                      double min_expected = 5.0);

// One-sample chi-square against given probabilities.
ChiSquareResult chi_square_goodness(const std::vector<uint64_t>& counts,
                                    const std::vector<double>& probs,
                                    double min_expected = 5.0);

// Kolmogorov-Smirnov test of uniformity on [lo, hi); returns the p-value.
double ks_test_uniform(std::vector<double> values, double lo, double hi);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

// Empirical quantile (linear interpolation) of an integer-valued histogram
// where hist[v] counts occurrences of value v.
double histogram_quantile(const std::vector<uint64_t>& hist, double q);

} // namespace lerw

#endif
