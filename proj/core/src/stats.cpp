#include "lerw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lerw {

namespace {

double gamma_series_p(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_cf_q(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double regularized_gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw std::invalid_argument("regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
    return gamma_cf_q(a, x);
}

double chi_square_sf(double x, double dof) {
    return regularized_gamma_q(dof / 2.0, x / 2.0);
}

ChiSquareResult two_sample_chi_square(const std::vector<uint64_t>& a,
                                      const std::vector<uint64_t>& b,
                                      double min_expected) {
    if (a.size() != b.size())
        throw std::invalid_argument("two_sample_chi_square: size mismatch");
    double na = 0.0, nb = 0.0;
    for (auto v : a) na += double(v);
    for (auto v : b) nb += double(v);
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("two_sample_chi_square: empty sample");
    double total = na + nb;

    // Merge rare cells (pooled expected below threshold) into one.
    uint64_t pool_a = 0, pool_b = 0;
    std::vector<std::pair<uint64_t, uint64_t>> cells;
    for (size_t i = 0; i < a.size(); ++i) {
        double pooled = double(a[i] + b[i]);
        if (pooled == 0.0) continue;
        double min_cell = std::min(pooled * na / total, pooled * nb / total);
        if (min_cell < min_expected) {
            pool_a += a[i];
            pool_b += b[i];
        } else {
            cells.push_back({a[i], b[i]});
        }
    }
    if (pool_a + pool_b > 0) cells.push_back({pool_a, pool_b});

    ChiSquareResult r;
    r.cells_used = cells.size();
    if (cells.size() < 2) {
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }
    double stat = 0.0;
    for (auto [ca, cb] : cells) {
        double pooled = double(ca + cb);
        double ea = pooled * na / total;
        double eb = pooled * nb / total;
        stat += (double(ca) - ea) * (double(ca) - ea) / ea;
        stat += (double(cb) - eb) * (double(cb) - eb) / eb;
    }
    r.statistic = stat;
    r.dof = int(cells.size()) - 1;
    r.p_value = chi_square_sf(stat, double(r.dof));
    return r;
}

ChiSquareResult chi_square_goodness(const std::vector<uint64_t>& counts,
                                    const std::vector<double>& probs,
                                    double min_expected) {
    if (counts.size() != probs.size())
        throw std::invalid_argument("chi_square_goodness: size mismatch");
    double n = 0.0;
    for (auto v : counts) n += double(v);
    uint64_t pool_c = 0;
    double pool_p = 0.0;
    std::vector<std::pair<uint64_t, double>> cells;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (probs[i] * n < min_expected) {
            pool_c += counts[i];
            pool_p += probs[i];
        } else {
            cells.push_back({counts[i], probs[i]});
        }
    }
    if (pool_p > 0.0) cells.push_back({pool_c, pool_p});
    ChiSquareResult r;
    r.cells_used = cells.size();
    if (cells.size() < 2) {
        r.dof = 0;
        r.p_value = 1.0;
        return r;
    }
    double stat = 0.0;
    for (auto [c, p] : cells) {
        double e = p * n;
        stat += (double(c) - e) * (double(c) - e) / e;
    }
    r.statistic = stat;
    r.dof = int(cells.size()) - 1;
    r.p_value = chi_square_sf(stat, double(r.dof));
    return r;
}

double ks_test_uniform(std::vector<double> values, double lo, double hi) {
    if (values.empty() || !(hi > lo))
        throw std::invalid_argument("ks_test_uniform: bad arguments");
    std::sort(values.begin(), values.end());
    double n = double(values.size());
    double d = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        double f = (values[i] - lo) / (hi - lo);
        d = std::max(d, std::abs(f - double(i) / n));
        d = std::max(d, std::abs(double(i + 1) / n - f));
    }
    double sqrt_n = std::sqrt(n);
    double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        double term = 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) *
                      std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 points");
    double n = double(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw std::invalid_argument("least_squares: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    f.residuals.resize(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        f.residuals[i] = y[i] - (f.intercept + f.slope * x[i]);
    return f;
}

double histogram_quantile(const std::vector<uint64_t>& hist, double q) {
    uint64_t total = 0;
    for (auto c : hist) total += c;
    if (total == 0)
        throw std::invalid_argument("histogram_quantile: empty histogram");
    double target = q * double(total - 1);
    uint64_t rank_lo = uint64_t(std::floor(target));
    uint64_t rank_hi = uint64_t(std::ceil(target));
    double frac = target - double(rank_lo);
    uint64_t cum = 0;
    double v_lo = -1.0, v_hi = -1.0;
    for (size_t v = 0; v < hist.size(); ++v) {
        cum += hist[v];
        if (v_lo < 0.0 && cum > rank_lo) v_lo = double(v);
        if (cum > rank_hi) {
            v_hi = double(v);
            break;
        }
    }
    if (v_hi < 0.0) v_hi = v_lo;
    return v_lo + frac * (v_hi - v_lo);
}

} // namespace lerw
