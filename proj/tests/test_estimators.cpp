#include <doctest.h>

#include <cmath>

#include "lerw/errors.hpp"
#include "lerw/estimators.hpp"

using namespace lerw;

TEST_CASE("estimate_mn at n=1 is deterministic") {
    MnEstimate est = estimate_mn(1, 500, 9, 2);
    CHECK(est.report.estimate == 1.0);
    CHECK(est.report.std_error == 0.0);
    CHECK(est.q50 == doctest::Approx(1.0));
    CHECK(est.q99 == doctest::Approx(1.0));
}

TEST_CASE("estimate_mn is identical for every worker count") {
    MnEstimate a = estimate_mn(16, 3000, 12345, 1);
    MnEstimate b = estimate_mn(16, 3000, 12345, 3);
    MnEstimate c = estimate_mn(16, 3000, 12345, 8);
    CHECK(a.report.estimate == b.report.estimate);
    CHECK(b.report.estimate == c.report.estimate);
    CHECK(a.report.std_error == c.report.std_error);
    CHECK(a.q90 == c.q90);
}

TEST_CASE("growth exponent fit on synthetic data") {
    std::vector<std::pair<double, double>> exact;
    for (double n : {16.0, 32.0, 64.0, 128.0})
        exact.push_back({n, std::pow(n, 1.25)});
    ExponentFit fit = fit_growth_exponent(exact);
    CHECK(fit.slope == doctest::Approx(1.25).epsilon(1e-12));
    for (double r : fit.residuals) CHECK(std::abs(r) < 1e-12);
    CHECK(fit.half_width < 1e-10);

    std::vector<std::pair<double, double>> scaled;
    for (double n : {16.0, 32.0, 64.0, 128.0})
        scaled.push_back({n, 3.0 * std::pow(n, 1.25)});
    CHECK(fit_growth_exponent(scaled).slope ==
          doctest::Approx(1.25).epsilon(1e-12));

    std::vector<std::pair<double, double>> degenerate = {
        {16.0, 10.0}, {16.0, 11.0}, {32.0, 20.0}};
    CHECK_THROWS_AS(fit_growth_exponent(degenerate), DegenerateFit);
}

TEST_CASE("edge probabilities: consistency identity and determinism") {
    std::vector<std::pair<double, double>> bins = {
        {0.3, 0.5}, {0.5, 0.9}, {1.05, 1.10}};
    EdgeProbResult a = estimate_edge_probability(8, 2000, bins, true,
                                                 SleParams::make(2.0), 5, 1);
    // edges beyond the reachable set are never hit
    CHECK(a.bins[2].edges > 0);
    CHECK(a.bins[2].hits == 0);
    // every traversed edge is counted exactly once per traversal
    CHECK(a.total_edge_hits == a.mn_sum);
    CHECK(a.c_n == doctest::Approx(a.mn_mean));
    EdgeProbResult b = estimate_edge_probability(8, 2000, bins, true,
                                                 SleParams::make(2.0), 5, 4);
    CHECK(a.mn_sum == b.mn_sum);
    for (size_t i = 0; i < a.bins.size(); ++i) {
        CHECK(a.bins[i].hits == b.bins[i].hits);
        CHECK(a.bins[i].scaled_ratio == b.bins[i].scaled_ratio);
        CHECK(a.bins[i].edges > 0);
    }
}

TEST_CASE("conditional occupation: whole-domain identity") {
    // with the ball covering everything, conditioning is vacuous and the
    // conditional step count is exactly the M_n mean of the same run
    ConditionalOccResult res = estimate_conditional_occupation(
        {0.0, 0.0}, {2.5}, 8, 2000, 21, 2, true, 100,
        /*enforce_disk_containment=*/false);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].hit_rate == 1.0);
    CHECK(res.rows[0].cond_mean_steps == doctest::Approx(res.mn_mean));
}

TEST_CASE("conditional occupation preconditions") {
    CHECK_THROWS_AS(estimate_conditional_occupation({0.9, 0.0}, {0.1}, 16, 100,
                                                    1, 1),
                    PreconditionError);
    // ball so small that hits are essentially impossible at these samples
    CHECK_THROWS_AS(estimate_conditional_occupation({0.4, 0.0}, {0.002}, 64,
                                                    200, 1, 2),
                    InsufficientHits);
}

TEST_CASE("Es(1) equals 3/4 (16-case enumeration)") {
    // Both objects are single uniform edges from the origin; of the 16
    // equally likely ordered pairs, 12 use different neighbors.
    EstimateReport rep = estimate_es(1, 100000, 31, 2);
    CHECK(std::abs(rep.estimate - 0.75) < 3.0 * rep.std_error);
    CHECK(rep.std_error > 0.0);
}

TEST_CASE("Es(n) is nonincreasing under coupled seeds") {
    uint64_t samples = 20000, seed = 33;
    EstimateReport e4 = estimate_es(4, samples, seed, 2);
    EstimateReport e8 = estimate_es(8, samples, seed, 2);
    EstimateReport e16 = estimate_es(16, samples, seed, 2);
    auto band = [](const EstimateReport& a, const EstimateReport& b) {
        return 3.0 * std::sqrt(a.std_error * a.std_error +
                               b.std_error * b.std_error);
    };
    CHECK(e8.estimate <= e4.estimate + band(e4, e8));
    CHECK(e16.estimate <= e8.estimate + band(e8, e16));
}

TEST_CASE("Es(m,n) and the scaling fit") {
    EstimateReport rep = estimate_es2(2, 8, 20000, 37, 2);
    CHECK(rep.estimate > 0.0);
    CHECK(rep.estimate < 1.0);
    // Es(m,n) >= Es(n): the terminal part is a subset of the whole path
    EstimateReport full = estimate_es(8, 20000, 37, 2);
    CHECK(rep.estimate + 3.0 * (rep.std_error + full.std_error) >=
          full.estimate);

    EsScalingResult scaling = es_scaling(32, {0.5, 0.25, 0.125}, 8000, 39, 2);
    CHECK(scaling.rows.size() == 3);
    CHECK(scaling.fitted_exponent > 0.1);
    CHECK(scaling.fitted_exponent < 1.3);
    CHECK_THROWS_AS(es_scaling(32, {0.5}, 100, 1, 1), PreconditionError);
}

TEST_CASE("hit probability basics") {
    // the curve ends at the origin, so any ball around a center closer
    // than eps to the origin is always hit
    EstimateReport sure =
        estimate_hit_probability({0.3, 0.0}, 0.35, 16, 2000, 41, 2);
    CHECK(sure.estimate == 1.0);

    EstimateReport some =
        estimate_hit_probability({0.5, 0.0}, 0.1, 32, 4000, 43, 2);
    CHECK(some.estimate > 0.0);
    CHECK(some.estimate < 1.0);

    EstimateReport w1 =
        estimate_hit_probability({0.5, 0.0}, 0.1, 32, 4000, 43, 1);
    CHECK(w1.estimate == some.estimate);
}

TEST_CASE("sle hit probability smoke") {
    TraceOptions opt;
    opt.stride = 16;
    EstimateReport rep =
        sle_hit_probability({0.5, 0.0}, 0.2, 2.0, 3.0, 2e-3, 30, 45, 2, opt);
    CHECK(rep.estimate >= 0.0);
    CHECK(rep.estimate <= 1.0);
    CHECK(rep.count == 30);
}

TEST_CASE("edge-visit ratios are stable in n per radial bin") {
    std::vector<std::pair<double, double>> bins = {
        {0.28, 0.32}, {0.48, 0.52}, {0.68, 0.72}};
    EdgeProbResult a = estimate_edge_probability(32, 30000, bins, true,
                                                 SleParams::make(2.0), 61, 0);
    EdgeProbResult b = estimate_edge_probability(64, 30000, bins, true,
                                                 SleParams::make(2.0), 61, 0);
    for (size_t i = 0; i < bins.size(); ++i) {
        double ra = a.bins[i].scaled_ratio, rb = b.bins[i].scaled_ratio;
        CHECK(std::abs(ra / rb - 1.0) < 0.05);
    }
}

TEST_CASE("hit probability is Cauchy in n") {
    Complex z{0.5, 0.0};
    double eps = 0.1;
    std::vector<EstimateReport> reps;
    for (int32_t n : {64, 128, 256})
        reps.push_back(estimate_hit_probability(z, eps, n, 4000, 63, 0));
    for (size_t i = 0; i + 1 < reps.size(); ++i) {
        double gap = std::abs(reps[i].estimate - reps[i + 1].estimate);
        double band = 3.0 * std::sqrt(reps[i].std_error * reps[i].std_error +
                                      reps[i + 1].std_error *
                                          reps[i + 1].std_error);
        CHECK(gap < band);
    }
}

TEST_CASE("lerw and sle hit probabilities agree at the loose gate") {
    // both discretizations carry bias; the gate is 5 combined s.e.
    Complex z{0.5, 0.0};
    double eps = 0.1;
    EstimateReport lerw = estimate_hit_probability(z, eps, 256, 4000, 65, 0);
    TraceOptions opt;
    opt.stride = 20;
    EstimateReport sle =
        sle_hit_probability(z, eps, 2.0, 4.0, 1e-3, 300, 65, 0, opt);
    double band = 5.0 * std::sqrt(lerw.std_error * lerw.std_error +
                                  sle.std_error * sle.std_error);
    CHECK(std::abs(lerw.estimate - sle.estimate) < band);
}

TEST_CASE("domain Markov: conditional law matches the slit-domain law") {
    auto dom = grid_approximation(DomainSpec::square(4.0), 1);
    DomainMarkovResult res = domain_markov_test(dom, 1, 1000000, 47, 2);
    CHECK(res.prefix.size() == 2);
    CHECK(res.prefix_count >= 500);
    CHECK(res.chi.p_value > 0.01);
}

TEST_CASE("domain Markov test has power (negative control)") {
    // j=2: in this domain every boundary point has a single interior
    // neighbor, so length-1 prefixes are determined by the exit point and
    // only j >= 2 distinguishes the slit comparator from the unslit one
    auto dom = grid_approximation(DomainSpec::square(4.0), 1);
    DomainMarkovResult res =
        domain_markov_test(dom, 2, 300000, 49, 2, /*wrong_comparator=*/true);
    CHECK(res.chi.p_value < 0.01);

    DomainMarkovResult good = domain_markov_test(dom, 2, 300000, 49, 2);
    CHECK(good.chi.p_value > 0.01);
}

TEST_CASE("domain Markov j=0 compares the law with itself") {
    auto dom = grid_approximation(DomainSpec::square(2.0), 1);
    DomainMarkovResult res = domain_markov_test(dom, 0, 60000, 51, 2);
    CHECK(res.chi.p_value > 0.001);
}

TEST_CASE("rare prefixes are rejected") {
    auto dom = grid_approximation(DomainSpec::square(4.0), 1);
    CHECK_THROWS_AS(domain_markov_test(dom, 1, 600, 53, 1), PrefixTooRare);
}

TEST_CASE("standard errors shrink like samples^{-1/2}") {
    EstimateReport small = estimate_es(8, 5000, 67, 2);
    EstimateReport big = estimate_es(8, 20000, 67, 2);
    double shrink = small.std_error / big.std_error;
    CHECK(shrink > 1.6);
    CHECK(shrink < 2.4);

    MnEstimate m_small = estimate_mn(16, 2000, 69, 2);
    MnEstimate m_big = estimate_mn(16, 8000, 69, 2);
    double m_shrink = m_small.report.std_error / m_big.report.std_error;
    CHECK(m_shrink > 1.6);
    CHECK(m_shrink < 2.4);
}
