#include <doctest.h>

#include <cmath>

#include "lerw/errors.hpp"
#include "lerw/green.hpp"

using namespace lerw;

TEST_CASE("green function closed forms on the disk") {
    SleParams k2 = SleParams::make(2.0);
    CHECK(k2.dimension() == doctest::Approx(1.25));
    CHECK(green_disk({1.0, 0.0}, k2) == doctest::Approx(1.0));
    CHECK(green_disk({0.5, 0.0}, k2) ==
          doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-12));
    CHECK(green_disk({0.5, 0.0}, k2) == doctest::Approx(1.6817928305));

    SleParams k4 = SleParams::make(4.0);
    CHECK(k4.dimension() == doctest::Approx(1.5));
    CHECK(green_disk({0.25, 0.0}, k4) == doctest::Approx(2.0));

    CHECK_THROWS_AS(green_disk({0.0, 0.0}, k2), SingularAtOrigin);
    CHECK_THROWS_AS(SleParams::make(5.0), PreconditionError);
    CHECK_THROWS_AS(SleParams::make(0.0), PreconditionError);
}

TEST_CASE("green function is radial and decreasing") {
    SleParams k2 = SleParams::make(2.0);
    double prev = 1e300;
    for (double r = 0.05; r <= 1.0; r += 0.05) {
        double g = green_disk(std::polar(r, 0.77), k2);
        CHECK(g == doctest::Approx(green_disk({r, 0.0}, k2)));
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("conformal covariance on the catalog") {
    SleParams k2 = SleParams::make(2.0);
    Complex z{0.3, 0.2};
    CHECK(green_domain(z, ConformalMap::identity(), k2) ==
          doctest::Approx(green_disk(z, k2)));

    // scaling: |phi'/phi| = 1/|z| independent of the radius
    for (double r : {2.0, 5.0}) {
        Complex w{0.9, -0.4};
        CHECK(green_domain(w, ConformalMap::scaling(r), k2) ==
              doctest::Approx(std::pow(std::abs(w), -0.75)));
    }

    CHECK(green_domain(z, ConformalMap::rotation(1.1), k2) ==
          doctest::Approx(green_disk(z, k2)));
    CHECK_THROWS_AS(green_domain({0, 0}, ConformalMap::identity(), k2),
                    SingularAtOrigin);
}

TEST_CASE("riemann sum approximates areas") {
    auto dom = grid_approximation(DomainSpec::disk(1.0), 64);
    auto one = [](Complex) { return 1.0; };
    RiemannSum s = riemann_sum(one, dom, 0.3, 0.7);
    double area = M_PI * (0.49 - 0.09);
    CHECK(std::abs(s.value - area) / area < 0.02);
    CHECK(s.excluded_edges == 0);
}

TEST_CASE("riemann sum of the green function against the radial integral") {
    SleParams k2 = SleParams::make(2.0);
    auto g = [&](Complex z) { return green_disk(z, k2); };
    double a = 0.2, b = 0.8;
    double exact = 2.0 * M_PI * 0.8 * (std::pow(b, 1.25) - std::pow(a, 1.25));
    auto dom = grid_approximation(DomainSpec::disk(1.0), 128);
    RiemannSum s = riemann_sum(g, dom, a, b);
    CHECK(std::abs(s.value - exact) / exact < 0.02);
}

TEST_CASE("riemann sum error decreases with n") {
    auto fn = [](Complex z) { return std::exp(-std::norm(z)); };
    // smooth integrand over the annulus [0.3, 0.7]
    double exact = M_PI * (std::exp(-0.09) - std::exp(-0.49));
    double prev_err = 1e300;
    for (int32_t n : {32, 64, 128}) {
        auto dom = grid_approximation(DomainSpec::disk(1.0), n);
        RiemannSum s = riemann_sum(fn, dom, 0.3, 0.7);
        double err = std::abs(s.value - exact);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("regions containing the origin drop the innermost edge cells") {
    auto dom = grid_approximation(DomainSpec::disk(1.0), 16);
    SleParams k2 = SleParams::make(2.0);
    auto g = [&](Complex z) { return green_disk(z, k2); };
    RiemannSum s = riemann_sum(g, dom, 0.0, 0.5);
    CHECK(s.excluded_edges == 4);
    CHECK(std::isfinite(s.value));
    CHECK(s.value > 0.0);
}
