#include "lerw/measure.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "lerw/errors.hpp"
#include "lerw/stats.hpp"

namespace lerw {

OccupationMeasure::OccupationMeasure(std::vector<MeasureAtom> atoms)
    : atoms_(std::move(atoms)) {
    CompensatedSum sum;
    for (const auto& a : atoms_) {
        if (a.mass < 0.0)
            throw PreconditionError("OccupationMeasure: negative mass");
        sum.add(a.mass);
    }
    total_mass_ = sum.value();
}

OccupationMeasure occupation_from_edges(const LerwSample& sample, int32_t n,
                                        double c_n) {
    if (!(c_n > 0.0))
        throw PreconditionError("occupation_from_edges: c_n must be > 0");
    if (n < 1) throw PreconditionError("occupation_from_edges: n must be >= 1");
    const auto& pts = sample.path.points;
    std::vector<MeasureAtom> atoms;
    if (pts.size() >= 2) atoms.reserve(pts.size() - 1);
    double inv_n = 1.0 / double(n);
    double mass = 1.0 / c_n;
    for (size_t i = 1; i < pts.size(); ++i) {
        MeasureAtom atom;
        atom.a = {pts[i - 1].x * inv_n, pts[i - 1].y * inv_n};
        atom.b = {pts[i].x * inv_n, pts[i].y * inv_n};
        atom.mass = mass;
        atoms.push_back(atom);
    }
    return OccupationMeasure(std::move(atoms));
}

double ball_mass(const OccupationMeasure& mu, Complex z, double eps) {
    if (!(eps > 0.0)) throw PreconditionError("ball_mass: eps must be > 0");
    double e2 = eps * eps;
    CompensatedSum sum;
    for (const auto& a : mu.atoms()) {
        Complex r = a.representative() - z;
        if (std::norm(r) < e2) sum.add(a.mass);
    }
    return sum.value();
}

TestFamily TestFamily::dyadic(int level) {
    if (level < 1) throw PreconditionError("TestFamily: level must be >= 1");
    TestFamily f;
    f.level = level;
    return f;
}

namespace {

constexpr double kBoxMin = -2.0;
constexpr double kBoxMax = 2.0;

struct PointMass {
    double x, y, mass;
};

struct CellMass {
    int32_t i, j;
    double mass;
};

std::vector<PointMass> flatten(const OccupationMeasure& m) {
    std::vector<PointMass> out;
    out.reserve(m.atoms().size());
    for (const auto& a : m.atoms()) {
        if (a.mass == 0.0) continue;
        Complex r = a.representative();
        if (r.real() < kBoxMin || r.real() > kBoxMax || r.imag() < kBoxMin ||
            r.imag() > kBoxMax)
            throw PreconditionError(
                "levy_prokhorov: support outside the [-2,2]^2 family box");
        out.push_back({r.real(), r.imag(), a.mass});
    }
    return out;
}

std::vector<CellMass> bin_to_cells(const std::vector<PointMass>& atoms,
                                   double side) {
    std::unordered_map<uint64_t, CellMass> cells;
    for (const auto& p : atoms) {
        auto i = int32_t(std::floor(p.x / side));
        auto j = int32_t(std::floor(p.y / side));
        uint64_t key = (uint64_t(uint32_t(i)) << 32) | uint64_t(uint32_t(j));
        auto it = cells.try_emplace(key, CellMass{i, j, 0.0}).first;
        it->second.mass += p.mass;
    }
    std::vector<CellMass> out;
    out.reserve(cells.size());
    for (auto& [k, c] : cells) out.push_back(c);
    // deterministic order
    std::sort(out.begin(), out.end(), [](const CellMass& a, const CellMass& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return out;
}

double dist2_point_to_cell(const PointMass& p, const CellMass& c, double side) {
    double x0 = double(c.i) * side, x1 = x0 + side;
    double y0 = double(c.j) * side, y1 = y0 + side;
    double dx = std::max({x0 - p.x, p.x - x1, 0.0});
    double dy = std::max({y0 - p.y, p.y - y1, 0.0});
    return dx * dx + dy * dy;
}

// Dinic max-flow on doubles; sized for the small bipartite closure graphs
// built below.
class MaxFlow {
  public:
    explicit MaxFlow(size_t nodes) : head_(nodes, -1) {}

    void add_edge(size_t from, size_t to, double cap) {
        edges_.push_back({int(to), head_[from], cap});
        head_[from] = int(edges_.size()) - 1;
        edges_.push_back({int(from), head_[to], 0.0});
        head_[to] = int(edges_.size()) - 1;
    }

    double run(size_t s, size_t t) {
        double flow = 0.0;
        while (bfs(s, t)) {
            iter_ = head_;
            double f;
            while ((f = dfs(s, t, 1e300)) > kEps) flow += f;
        }
        return flow;
    }

  private:
    static constexpr double kEps = 1e-13;
    struct Edge {
        int to;
        int next;
        double cap;
    };

    bool bfs(size_t s, size_t t) {
        level_.assign(head_.size(), -1);
        std::queue<size_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            size_t u = q.front();
            q.pop();
            for (int e = head_[u]; e != -1; e = edges_[size_t(e)].next) {
                const Edge& ed = edges_[size_t(e)];
                if (ed.cap > kEps && level_[size_t(ed.to)] < 0) {
                    level_[size_t(ed.to)] = level_[u] + 1;
                    q.push(size_t(ed.to));
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs(size_t u, size_t t, double limit) {
        if (u == t) return limit;
        for (int& e = iter_[u]; e != -1; e = edges_[size_t(e)].next) {
            Edge& ed = edges_[size_t(e)];
            if (ed.cap > kEps && level_[size_t(ed.to)] == level_[u] + 1) {
                double f = dfs(size_t(ed.to), t, std::min(limit, ed.cap));
                if (f > kEps) {
                    ed.cap -= f;
                    edges_[size_t(e) ^ 1].cap += f;
                    return f;
                }
            }
        }
        return 0.0;
    }

    std::vector<Edge> edges_;
    std::vector<int> head_;
    std::vector<int> iter_;
    std::vector<int> level_;
};

// Exact supremum of mu(S) - nu(S^eps) over unions S of family squares.
// Selecting a square earns its mu mass and incurs every nu atom within eps
// of it, so the optimum is a maximum-weight closure computed by min cut.
// The result certifies a violation; restricting events to the family keeps
// the final distance a lower bound of d_LP.
double max_violation(const std::vector<CellMass>& mu_cells,
                     const std::vector<PointMass>& nu_sorted_by_x, double side,
                     double eps) {
    const auto& nu = nu_sorted_by_x;
    size_t ncells = mu_cells.size();
    if (ncells == 0) return 0.0;

    size_t source = 0, sink = 1 + ncells + nu.size();
    MaxFlow flow(sink + 1);
    double mu_total = 0.0;
    double e2 = eps * eps;
    const double inf = 1e300;
    for (size_t c = 0; c < ncells; ++c) {
        mu_total += mu_cells[c].mass;
        flow.add_edge(source, 1 + c, mu_cells[c].mass);
        double x0 = double(mu_cells[c].i) * side;
        double lo = x0 - eps, hi = x0 + side + eps;
        auto begin = std::lower_bound(
            nu.begin(), nu.end(), lo,
            [](const PointMass& p, double v) { return p.x < v; });
        for (auto it = begin; it != nu.end() && it->x <= hi; ++it) {
            if (dist2_point_to_cell(*it, mu_cells[c], side) <= e2)
                flow.add_edge(1 + c, 1 + ncells + size_t(it - nu.begin()),
                              inf);
        }
    }
    for (size_t a = 0; a < nu.size(); ++a)
        flow.add_edge(1 + ncells + a, sink, nu[a].mass);

    double best = mu_total - flow.run(source, sink);
    return best > 0.0 ? best : 0.0;
}

struct LpInputs {
    std::vector<PointMass> mu_atoms, nu_atoms;
    std::vector<CellMass> mu_cells, nu_cells;
    std::vector<PointMass> mu_by_x, nu_by_x;
    double mu_total = 0.0, nu_total = 0.0;
};

LpInputs prepare(const OccupationMeasure& mu, const OccupationMeasure& nu,
                 double side) {
    LpInputs in;
    in.mu_atoms = flatten(mu);
    in.nu_atoms = flatten(nu);
    in.mu_cells = bin_to_cells(in.mu_atoms, side);
    in.nu_cells = bin_to_cells(in.nu_atoms, side);
    in.mu_by_x = in.mu_atoms;
    in.nu_by_x = in.nu_atoms;
    auto by_x = [](const PointMass& a, const PointMass& b) {
        return a.x < b.x;
    };
    std::sort(in.mu_by_x.begin(), in.mu_by_x.end(), by_x);
    std::sort(in.nu_by_x.begin(), in.nu_by_x.end(), by_x);
    in.mu_total = mu.total_mass();
    in.nu_total = nu.total_mass();
    return in;
}

bool feasible(const LpInputs& in, double side, double eps) {
    double slack = eps + 1e-12;
    if (max_violation(in.mu_cells, in.nu_by_x, side, eps) > slack) return false;
    if (max_violation(in.nu_cells, in.mu_by_x, side, eps) > slack) return false;
    return true;
}

} // namespace

double levy_prokhorov(const OccupationMeasure& mu, const OccupationMeasure& nu,
                      const TestFamily& family, double bisect_tol) {
    double side = family.side();
    LpInputs in = prepare(mu, nu, side);
    if (in.mu_atoms.empty() && in.nu_atoms.empty()) return 0.0;

    double hi = std::abs(in.mu_total - in.nu_total) + (kBoxMax - kBoxMin) * 1.5;
    if (feasible(in, side, 0.0)) return 0.0;
    double lo = 0.0;
    while (hi - lo > bisect_tol) {
        double mid = 0.5 * (lo + hi);
        if (feasible(in, side, mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

LpBracket levy_prokhorov_bracket(const OccupationMeasure& mu,
                                 const OccupationMeasure& nu,
                                 const TestFamily& family, double bisect_tol) {
    LpBracket out;
    out.resolution = family.side();
    out.lower = levy_prokhorov(mu, nu, family, bisect_tol);

    // Greedy mass matching: transports min(total masses) between the atom
    // sets; d_LP <= max(matching radius, unmatched mass).
    std::vector<PointMass> ma = flatten(mu), na = flatten(nu);
    double gap = std::abs(mu.total_mass() - nu.total_mass());
    if (ma.empty() || na.empty()) {
        out.upper = std::max(gap, out.lower);
        return out;
    }
    struct Pair {
        double d2;
        uint32_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(ma.size() * na.size());
    for (uint32_t i = 0; i < ma.size(); ++i) {
        for (uint32_t j = 0; j < na.size(); ++j) {
            double dx = ma[i].x - na[j].x, dy = ma[i].y - na[j].y;
            pairs.push_back({dx * dx + dy * dy, i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& b) { return a.d2 < b.d2; });
    std::vector<double> rem_a(ma.size()), rem_b(na.size());
    for (size_t i = 0; i < ma.size(); ++i) rem_a[i] = ma[i].mass;
    for (size_t j = 0; j < na.size(); ++j) rem_b[j] = na[j].mass;
    double to_move = std::min(mu.total_mass(), nu.total_mass());
    double radius2 = 0.0;
    for (const auto& p : pairs) {
        if (to_move <= 1e-15) break;
        double m = std::min(rem_a[p.i], rem_b[p.j]);
        if (m <= 0.0) continue;
        rem_a[p.i] -= m;
        rem_b[p.j] -= m;
        to_move -= m;
        radius2 = p.d2;
    }
    out.upper = std::max({std::sqrt(radius2), gap, out.lower});
    return out;
}

} // namespace lerw
