#include <doctest.h>

#include <cmath>

#include "lerw/curve.hpp"
#include "lerw/errors.hpp"
#include "lerw/rng.hpp"
#include "lerw/walk.hpp"

using namespace lerw;

namespace {

Curve lerw_curve(uint64_t stream, int32_t n, double c_n) {
    RngStream rng(101, stream);
    auto sample = sample_lerw(n, rng);
    return embed_lerw(sample, n, SpeedFunction{c_n});
}

// exhaustive minimum over all monotone couplings of the vertex sequences
double frechet_brute(const std::vector<Complex>& p,
                     const std::vector<Complex>& q, size_t i, size_t j) {
    double d = std::abs(p[i] - q[j]);
    if (i == 0 && j == 0) return d;
    double best = 1e300;
    if (i > 0) best = std::min(best, frechet_brute(p, q, i - 1, j));
    if (j > 0) best = std::min(best, frechet_brute(p, q, i, j - 1));
    if (i > 0 && j > 0) best = std::min(best, frechet_brute(p, q, i - 1, j - 1));
    return std::max(best, d);
}

Curve random_polyline(RngStream& rng, size_t segments, double step) {
    Curve c;
    Complex p{0.0, 0.0};
    double t = 0.0;
    c.vertices.push_back(p);
    c.times.push_back(0.0);
    for (size_t i = 0; i < segments; ++i) {
        double ang = 6.283185307179586 * rng.next_double();
        p += std::polar(step * (0.2 + rng.next_double()), ang);
        t += 0.05 + rng.next_double() * 0.2;
        c.vertices.push_back(p);
        c.times.push_back(t);
    }
    return c;
}

} // namespace

TEST_CASE("curve evaluation interpolates and sits at endpoints") {
    Curve c = Curve::segment({0.0, 0.0}, {1.0, 0.0}, 2.0);
    CHECK(c.at(0.0) == Complex{0.0, 0.0});
    CHECK(c.at(1.0) == Complex{0.5, 0.0});
    CHECK(c.at(5.0) == Complex{1.0, 0.0}); // sits at its endpoint
    CHECK(c.at(-1.0) == Complex{0.0, 0.0});
    CHECK_THROWS_AS(Curve::segment({0, 0}, {1, 0}, 0.0), PreconditionError);
}

TEST_CASE("embed_lerw geometry and lifetime") {
    RngStream rng(7, 0);
    auto s = sample_lerw(1, rng);
    Curve c = embed_lerw(s, 1, SpeedFunction{1.0});
    CHECK(c.vertices.size() == 2);
    CHECK(std::abs(c.vertices.front()) == doctest::Approx(1.0));
    CHECK(c.vertices.back() == Complex{0.0, 0.0});
    CHECK(c.lifetime() == doctest::Approx(1.0));

    RngStream rng2(7, 1);
    auto s2 = sample_lerw(16, rng2);
    double c_n = std::pow(16.0, 1.25);
    Curve y = embed_lerw(s2, 16, SpeedFunction{c_n});
    CHECK(y.lifetime() == doctest::Approx(double(s2.steps) / c_n));
    for (size_t i = 1; i < y.vertices.size(); ++i) {
        CHECK(std::abs(y.vertices[i] - y.vertices[i - 1]) ==
              doctest::Approx(1.0 / 16.0));
        CHECK(y.times[i] - y.times[i - 1] == doctest::Approx(1.0 / c_n));
    }
}

TEST_CASE("dist_sup closed forms") {
    Curve a = Curve::segment({0, 0}, {1, 0}, 1.0);
    CHECK(dist_sup(a, a) == 0.0);

    Curve c1{{{0.0, 0.0}, {0.0, 0.0}}, {0.0, 1.0}};
    Curve c2{{{0.0, 0.0}, {0.0, 0.0}}, {0.0, 2.0}};
    CHECK(dist_sup(c1, c2) == doctest::Approx(1.0));

    Curve sx = Curve::segment({0, 0}, {1, 0}, 1.0);
    Curve sy = Curve::segment({0, 0}, {0, 1}, 1.0);
    CHECK(dist_sup(sx, sy) == doctest::Approx(std::sqrt(2.0)));
    // dense-sampling confirmation
    double dense = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        double t = k / 2000.0;
        dense = std::max(dense, std::abs(sx.at(t) - sy.at(t)));
    }
    CHECK(dist_sup(sx, sy) == doctest::Approx(dense).epsilon(1e-9));
}

TEST_CASE("dist_rho ignores reparametrization exactly") {
    Curve a{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, {0.0, 1.0, 2.0}};
    // same trace, skewed clock, plus an interpolated vertex on a segment
    Curve b{{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {1.0, 1.0}},
            {0.0, 0.3, 0.9, 5.0}};
    CHECK(dist_rho(a, b) == 0.0);

    Curve p{{{0.0, 0.0}, {0.0, 0.0}}, {0.0, 1.0}};
    Curve q{{{3.0, 4.0}, {3.0, 4.0}}, {0.0, 1.0}};
    CHECK(dist_rho(p, q) == doctest::Approx(5.0));
}

TEST_CASE("dist_rho equals brute force on small curves") {
    for (uint64_t r = 0; r < 60; ++r) {
        RngStream rng(303, r);
        Curve a = random_polyline(rng, 2 + rng.next_u32() % 4, 0.5);
        Curve b = random_polyline(rng, 2 + rng.next_u32() % 4, 0.5);
        double dp = dist_rho(a, b);
        // brute force works on the same canonical chains the DP uses
        CurveClass ca(a), cb(b);
        const auto& p = ca.representative().vertices;
        const auto& q = cb.representative().vertices;
        double ref = frechet_brute(p, q, p.size() - 1, q.size() - 1);
        CHECK(dp == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("metric axioms hold on random curves") {
    for (uint64_t r = 0; r < 40; ++r) {
        RngStream rng(305, r);
        Curve a = random_polyline(rng, 3, 0.4);
        Curve b = random_polyline(rng, 4, 0.4);
        Curve c = random_polyline(rng, 3, 0.4);
        CHECK(dist_sup(a, b) == doctest::Approx(dist_sup(b, a)));
        CHECK(dist_sup(a, c) <= dist_sup(a, b) + dist_sup(b, c) + 1e-12);
        CHECK(dist_rho(a, b) == doctest::Approx(dist_rho(b, a)));
        CHECK(dist_rho(a, c) <= dist_rho(a, b) + dist_rho(b, c) + 1e-12);
    }
}

TEST_CASE("map_T masses and class normalization") {
    Curve seg = Curve::segment({0, 0}, {1, 0}, 1.0);
    auto [cls, mu] = map_T(seg, 0.25);
    CHECK(mu.total_mass() == doctest::Approx(1.0));
    CHECK(cls.representative().lifetime() == 1.0);
    for (const auto& atom : mu.atoms()) {
        CHECK(atom.length() <= 0.25 + 1e-12);
        CHECK(std::abs(atom.representative().imag()) < 1e-12);
    }

    for (uint64_t r = 0; r < 50; ++r) {
        RngStream rng(307, r);
        Curve c = random_polyline(rng, 5, 0.3);
        auto pair = map_T(c, 0.1);
        CHECK(pair.measure.total_mass() ==
              doctest::Approx(c.lifetime()).epsilon(1e-12));
    }
}

TEST_CASE("T is Lipschitz with constant 2 (product metric)") {
    // vertex perturbation plus a terminal wait keeps the DP and family
    // approximations on the certified side of the bound
    TestFamily family = TestFamily::dyadic(6);
    for (uint64_t r = 0; r < 60; ++r) {
        RngStream rng(309, r);
        Curve a = random_polyline(rng, 6, 0.2);
        Curve b = a;
        double scale = 0.02 + 0.1 * rng.next_double();
        for (auto& v : b.vertices)
            v += Complex{scale * (rng.next_double() - 0.5),
                         scale * (rng.next_double() - 0.5)};
        double wait = 0.3 * rng.next_double();
        if (wait > 0.0) {
            b.vertices.push_back(b.vertices.back());
            b.times.push_back(b.times.back() + wait);
        }

        double d = dist_sup(a, b);
        auto ta = map_T(a, 10.0);
        auto tb = map_T(b, 10.0);
        double rho = dist_rho(ta.cls.representative(), tb.cls.representative());
        double lp = levy_prokhorov(ta.measure, tb.measure, family);
        CHECK(rho + lp <= 2.0 * d + 1e-9);
    }
}

TEST_CASE("S inverts T on simple curves") {
    for (uint64_t r = 0; r < 40; ++r) {
        Curve c = lerw_curve(r, 8, 10.0 + double(r % 7));
        auto [cls, mu] = map_T(c, 0.5);
        Curve back = map_S(cls, mu, kLatticeTol);
        CHECK(dist_sup(back, c) < 1e-9);
    }
}

TEST_CASE("T(S(cls,mu)) returns the pair within tolerance") {
    TestFamily family = TestFamily::dyadic(6);
    for (uint64_t r = 0; r < 20; ++r) {
        Curve c = lerw_curve(100 + r, 8, 12.0);
        auto [cls, mu] = map_T(c, 0.25);
        Curve s = map_S(cls, mu, kLatticeTol);
        auto [cls2, mu2] = map_T(s, 0.25);
        CHECK(dist_rho(cls.representative(), cls2.representative()) < 1e-9);
        CHECK(levy_prokhorov(mu, mu2, family) < 2.0 * family.side());
    }
}

TEST_CASE("uniform mass on a segment gives a constant-speed curve") {
    Curve seg = Curve::segment({0, 0}, {2, 0}, 7.0);
    CurveClass cls(seg);
    OccupationMeasure mu({MeasureAtom{{0, 0}, {2, 0}, 3.0}});
    Curve s = map_S(cls, mu, kLatticeTol);
    CHECK(s.lifetime() == doctest::Approx(3.0));
    CHECK(std::abs(s.at(1.5) - Complex{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(s.at(3.0) - Complex{2.0, 0.0}) < 1e-12);
}

TEST_CASE("S handles zero-mass arcs via the right-continuous inverse") {
    Curve path{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, {0.0, 1.0, 2.0}};
    CurveClass cls(path);
    // all mass on the second leg; the inverse jumps over the first leg
    OccupationMeasure mu({MeasureAtom{{1.0, 0.0}, {1.0, 1.0}, 2.0}});
    Curve s = map_S(cls, mu, kLatticeTol);
    s.validate();
    CHECK(s.lifetime() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(s.at(1.0) - Complex{1.0, 0.5}) < 1e-6);
    CHECK(std::abs(s.vertices.back() - Complex{1.0, 1.0}) < 1e-12);
}

TEST_CASE("S waits at point masses") {
    Curve seg = Curve::segment({0, 0}, {1, 0}, 1.0);
    CurveClass cls(seg);
    OccupationMeasure mu({MeasureAtom{{0.0, 0.0}, {1.0, 0.0}, 1.0},
                          MeasureAtom{{0.5, 0.0}, {0.5, 0.0}, 4.0}});
    Curve s = map_S(cls, mu, kLatticeTol);
    CHECK(s.lifetime() == doctest::Approx(5.0).epsilon(1e-9));
    // halfway point carries an extra 4 units of waiting time
    CHECK(std::abs(s.at(0.51) - Complex{0.5, 0.0}) < 1e-2);
    CHECK(std::abs(s.at(4.49) - Complex{0.5, 0.0}) < 1e-2);
}

TEST_CASE("S rejects off-trace mass") {
    Curve seg = Curve::segment({0, 0}, {1, 0}, 1.0);
    CurveClass cls(seg);
    OccupationMeasure mu({MeasureAtom{{0.3, 0.5}, {0.4, 0.5}, 1.0}});
    CHECK_THROWS_AS(map_S(cls, mu, 1e-6), SupportMismatch);
    OccupationMeasure empty(std::vector<MeasureAtom>{});
    CHECK_THROWS_AS(map_S(cls, empty, 1e-6), PreconditionError);
}
