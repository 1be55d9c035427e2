#include <doctest.h>

#include <cmath>

#include "lerw/errors.hpp"
#include "lerw/stats.hpp"
#include "lerw/walk.hpp"
#include "oracles.hpp"

using namespace lerw;

namespace {

LatticePath make_path(std::initializer_list<std::pair<int32_t, int32_t>> pts) {
    LatticePath p;
    for (auto [x, y] : pts) p.points.push_back({x, y});
    return p;
}

LatticePath random_walk_path(RngStream& rng, size_t steps) {
    LatticePath p;
    LatticePoint cur{0, 0};
    p.points.push_back(cur);
    for (size_t i = 0; i < steps; ++i) {
        auto d = kSteps[rng.next_direction()];
        cur.x += d[0];
        cur.y += d[1];
        p.points.push_back(cur);
    }
    return p;
}

} // namespace

TEST_CASE("walk to radius 1 is a single uniform step") {
    std::vector<uint64_t> counts(4, 0);
    const uint64_t n = 40000;
    for (uint64_t r = 0; r < n; ++r) {
        RngStream rng(3, r);
        auto path = sample_srw_to_radius(1, rng);
        REQUIRE(path.points.size() == 2);
        LatticePoint e = path.points[1];
        CHECK(e.norm2() == 1);
        size_t dir = e.x == 1 ? 0 : e.x == -1 ? 1 : e.y == 1 ? 2 : 3;
        ++counts[dir];
    }
    auto res = chi_square_goodness(counts, {0.25, 0.25, 0.25, 0.25});
    CHECK(res.p_value > 0.001);
}

TEST_CASE("walk endpoints stay within one step of the target circle") {
    for (int32_t n : {2, 3, 7}) {
        for (uint64_t r = 0; r < 200; ++r) {
            RngStream rng(9, r);
            auto path = sample_srw_to_radius(n, rng);
            CHECK(path.is_nearest_neighbor());
            for (size_t i = 0; i + 1 < path.points.size(); ++i)
                CHECK(path.points[i].norm2() < int64_t(n) * n);
            auto e = path.points.back();
            CHECK(e.norm2() >= int64_t(n) * n);
            CHECK(std::sqrt(double(e.norm2())) < double(n) + 1.0);
        }
    }
}

TEST_CASE("mean exit step matches the Dirichlet solve") {
    // interior of the stopping rule |S| >= 2 is {x : |x| < 2} (9 points)
    double exact = test::dirichlet_mean_exit_ball(2);
    const uint64_t samples = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (uint64_t r = 0; r < samples; ++r) {
        RngStream rng(17, r);
        auto path = sample_srw_to_radius(2, rng);
        double tau = double(path.points.size() - 1);
        sum += tau;
        sumsq += tau * tau;
    }
    double mean = sum / double(samples);
    double se = std::sqrt((sumsq / samples - mean * mean) / double(samples));
    CHECK(std::abs(mean - exact) < 3.0 * se);
}

TEST_CASE("single-vertex domain walk exits in one step") {
    GridDomain dom(1, {{0, 0}});
    RngStream rng(1, 0);
    auto path = sample_srw_in_domain(dom, rng);
    CHECK(path.points.size() == 2);
    CHECK(dom.on_boundary(path.points.back()));
}

TEST_CASE("side-2 square: exit symmetry and mean exit time") {
    auto dom = grid_approximation(DomainSpec::square(2.0), 1);
    double exact = test::dirichlet_mean_exit_domain(dom);

    const uint64_t samples = 100000;
    std::vector<uint64_t> mid_edges(4, 0); // exits at (+-2,0),(0,+-2)
    double sum = 0.0, sumsq = 0.0;
    for (uint64_t r = 0; r < samples; ++r) {
        RngStream rng(23, r);
        auto path = sample_srw_in_domain(dom, rng);
        for (size_t i = 0; i + 1 < path.points.size(); ++i)
            CHECK(dom.contains(path.points[i]));
        auto e = path.points.back();
        CHECK(dom.on_boundary(e));
        double tau = double(path.points.size() - 1);
        sum += tau;
        sumsq += tau * tau;
        if (e.x == 2 && e.y == 0) ++mid_edges[0];
        if (e.x == -2 && e.y == 0) ++mid_edges[1];
        if (e.y == 2 && e.x == 0) ++mid_edges[2];
        if (e.y == -2 && e.x == 0) ++mid_edges[3];
    }
    double mean = sum / double(samples);
    double se = std::sqrt((sumsq / samples - mean * mean) / double(samples));
    CHECK(std::abs(mean - exact) < 3.0 * se);
    auto res = chi_square_goodness(mid_edges, {0.25, 0.25, 0.25, 0.25});
    CHECK(res.p_value > 0.001);
}

TEST_CASE("loop erasure hand cases") {
    auto le1 = loop_erase(make_path({{0, 0}, {1, 0}, {0, 0}, {0, 1}}));
    CHECK(le1.points == make_path({{0, 0}, {0, 1}}).points);

    auto sa = make_path({{0, 0}, {1, 0}, {1, 1}});
    CHECK(loop_erase(sa).points == sa.points);

    auto witness =
        make_path({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}, {0, 1}});
    CHECK(loop_erase(witness).points == make_path({{0, 0}, {0, 1}}).points);
    CHECK(reverse_loop_erase(witness).points ==
          make_path({{0, 0}, {1, 0}, {1, 1}, {0, 1}}).points);
}

TEST_CASE("reverse loop erasure properties") {
    auto sa = make_path({{0, 0}, {0, 1}, {1, 1}});
    CHECK(reverse_loop_erase(sa).points == sa.points);

    for (uint64_t r = 0; r < 300; ++r) {
        RngStream rng(31, r);
        auto path = random_walk_path(rng, 1 + size_t(rng.next_u32() % 60));
        // functional identity RLE = rev . LE . rev
        LatticePath rev;
        rev.points.assign(path.points.rbegin(), path.points.rend());
        auto lhs = reverse_loop_erase(path);
        auto manual = loop_erase(rev);
        std::reverse(manual.points.begin(), manual.points.end());
        CHECK(lhs.points == manual.points);
        CHECK(lhs.points.front() == path.points.front());
        CHECK(lhs.points.back() == path.points.back());
        CHECK(lhs.is_self_avoiding());
    }
}

TEST_CASE("single-pass erasure equals the literal recursion") {
    for (uint64_t r = 0; r < 500; ++r) {
        RngStream rng(37, r);
        auto path = random_walk_path(rng, 1 + size_t(rng.next_u32() % 50));
        auto fast = loop_erase(path);
        auto ref = test::loop_erase_reference(path);
        CHECK(fast.points == ref.points);
        CHECK(loop_erase(fast).points == fast.points); // idempotent
    }
}

TEST_CASE("lerw sample invariants") {
    RngStream rng1(41, 0);
    auto s1 = sample_lerw(1, rng1);
    CHECK(s1.steps == 1);
    CHECK(s1.path.points.back() == LatticePoint{0, 0});

    for (uint64_t r = 0; r < 200; ++r) {
        RngStream rng(43, r);
        auto s = sample_lerw(6, rng);
        CHECK(s.path.is_self_avoiding());
        CHECK(s.path.is_nearest_neighbor());
        CHECK(s.path.points.back() == LatticePoint{0, 0});
        CHECK(s.path.points.front().norm2() >= 36);
        CHECK(s.steps == s.path.points.size() - 1);
        CHECK(s.srw_steps >= s.steps);
    }
}

TEST_CASE("fast sampler matches the public erasure path") {
    LerwSampler sampler;
    for (uint64_t r = 0; r < 100; ++r) {
        RngStream rng(47, r);
        const auto& erased = sampler.sample_ball(8, rng);
        LatticePath walk;
        walk.points = sampler.walk();
        LatticePath rev;
        rev.points.assign(walk.points.rbegin(), walk.points.rend());
        auto expect = loop_erase(rev);
        CHECK(erased == expect.points);
    }
}

TEST_CASE("identical streams give identical samples") {
    LerwSampler a, b;
    RngStream r1(51, 9), r2(51, 9);
    auto pa = a.sample_ball(16, r1);
    auto pb = b.sample_ball(16, r2);
    CHECK(pa == pb);
}

TEST_CASE("mean lerw length at n=2 matches a high-precision oracle") {
    // oracle: same sampler, independent seed, 100x the samples
    const uint64_t oracle_samples = 10000000;
    LerwSampler sampler;
    uint64_t o_sum = 0, o_sumsq = 0;
    for (uint64_t r = 0; r < oracle_samples; ++r) {
        RngStream rng(777, r);
        uint64_t m = sampler.sample_ball(2, rng).size() - 1;
        o_sum += m;
        o_sumsq += m * m;
    }
    double o_mean = double(o_sum) / double(oracle_samples);
    double o_var =
        double(o_sumsq) / oracle_samples - o_mean * o_mean;
    double o_se = std::sqrt(o_var / double(oracle_samples));

    const uint64_t samples = 100000;
    uint64_t sum = 0, sumsq = 0;
    for (uint64_t r = 0; r < samples; ++r) {
        RngStream rng(53, r);
        uint64_t m = sampler.sample_ball(2, rng).size() - 1;
        sum += m;
        sumsq += m * m;
    }
    double mean = double(sum) / double(samples);
    double var = double(sumsq) / samples - mean * mean;
    double se = std::sqrt(var / double(samples));
    double combined = std::sqrt(se * se + o_se * o_se);
    CHECK(std::abs(mean - o_mean) < 3.0 * combined);
}
