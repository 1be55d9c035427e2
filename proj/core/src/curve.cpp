#include "lerw/curve.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lerw/errors.hpp"
#include "lerw/stats.hpp"

namespace lerw {

Complex Curve::at(double t) const {
    if (vertices.empty()) throw PreconditionError("Curve::at: empty curve");
    if (t <= times.front()) return vertices.front();
    if (t >= times.back()) return vertices.back();
    size_t hi = size_t(std::upper_bound(times.begin(), times.end(), t) -
                       times.begin());
    size_t lo = hi - 1;
    double span = times[hi] - times[lo];
    double w = (t - times[lo]) / span;
    return vertices[lo] + w * (vertices[hi] - vertices[lo]);
}

void Curve::validate() const {
    if (vertices.size() != times.size())
        throw PreconditionError("Curve: vertex/time size mismatch");
    if (vertices.empty()) throw PreconditionError("Curve: empty");
    if (times.front() != 0.0)
        throw PreconditionError("Curve: time must start at 0");
    for (size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1]))
            throw PreconditionError("Curve: times must be strictly increasing");
    }
    if (!std::isfinite(times.back()))
        throw PreconditionError("Curve: lifetime must be finite");
}

Curve Curve::segment(Complex from, Complex to, double duration) {
    Curve c;
    c.vertices = {from, to};
    c.times = {0.0, duration};
    c.validate();
    return c;
}

namespace {

// Canonical vertex chain of the trace: duplicate points dropped, interior
// vertices on a straight forward run removed.
std::vector<Complex> canonical_chain(const Curve& curve) {
    std::vector<Complex> pts;
    pts.reserve(curve.vertices.size());
    for (const auto& v : curve.vertices) {
        if (!pts.empty() && std::abs(v - pts.back()) == 0.0) continue;
        pts.push_back(v);
    }
    if (pts.empty()) pts.push_back(curve.vertices.front());
    if (pts.size() < 3) return pts;
    std::vector<Complex> out;
    out.push_back(pts[0]);
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        Complex u = pts[i] - out.back();
        Complex w = pts[i + 1] - pts[i];
        double cross = u.real() * w.imag() - u.imag() * w.real();
        double dot = u.real() * w.real() + u.imag() * w.imag();
        double scale = std::abs(u) * std::abs(w);
        if (std::abs(cross) <= 1e-12 * scale && dot > 0.0) continue;
        out.push_back(pts[i]);
    }
    out.push_back(pts.back());
    return out;
}

double chain_length(const std::vector<Complex>& chain) {
    double len = 0.0;
    for (size_t i = 1; i < chain.size(); ++i)
        len += std::abs(chain[i] - chain[i - 1]);
    return len;
}

} // namespace

CurveClass::CurveClass(const Curve& curve) {
    curve.validate();
    std::vector<Complex> chain = canonical_chain(curve);
    length_ = chain_length(chain);
    if (chain.size() < 2 || length_ == 0.0) {
        rep_.vertices = {chain.front(), chain.front()};
        rep_.times = {0.0, 1.0};
        return;
    }
    rep_.vertices = chain;
    rep_.times.resize(chain.size());
    double acc = 0.0;
    rep_.times[0] = 0.0;
    for (size_t i = 1; i < chain.size(); ++i) {
        acc += std::abs(chain[i] - chain[i - 1]);
        rep_.times[i] = acc / length_;
    }
    rep_.times.back() = 1.0;
}

Curve embed_lerw(const LerwSample& sample, int32_t n, SpeedFunction speed) {
    if (sample.path.points.empty())
        throw PreconditionError("embed_lerw: empty sample");
    if (!(speed.c_n > 0.0))
        throw PreconditionError("embed_lerw: speed must be positive");
    if (n < 1) throw PreconditionError("embed_lerw: n must be >= 1");
    Curve c;
    double inv_n = 1.0 / double(n);
    double inv_c = 1.0 / speed.c_n;
    c.vertices.reserve(sample.path.points.size());
    c.times.reserve(sample.path.points.size());
    for (size_t i = 0; i < sample.path.points.size(); ++i) {
        c.vertices.push_back({sample.path.points[i].x * inv_n,
                              sample.path.points[i].y * inv_n});
        c.times.push_back(double(i) * inv_c);
    }
    return c;
}

double dist_sup(const Curve& g1, const Curve& g2) {
    g1.validate();
    g2.validate();
    std::vector<double> knots;
    knots.reserve(g1.times.size() + g2.times.size());
    knots.insert(knots.end(), g1.times.begin(), g1.times.end());
    knots.insert(knots.end(), g2.times.begin(), g2.times.end());
    std::sort(knots.begin(), knots.end());
    double horizon = std::max(g1.lifetime(), g2.lifetime());
    double sup = std::abs(g1.at(horizon) - g2.at(horizon));
    for (double t : knots) {
        if (t > horizon) break;
        sup = std::max(sup, std::abs(g1.at(t) - g2.at(t)));
    }
    return std::abs(g1.lifetime() - g2.lifetime()) + sup;
}

RhoResult dist_rho_with_error(const Curve& g1, const Curve& g2) {
    std::vector<Complex> p = canonical_chain(g1);
    std::vector<Complex> q = canonical_chain(g2);
    size_t m = p.size(), k = q.size();

    double max_seg = 0.0;
    for (size_t i = 1; i < m; ++i)
        max_seg = std::max(max_seg, std::abs(p[i] - p[i - 1]));
    for (size_t j = 1; j < k; ++j)
        max_seg = std::max(max_seg, std::abs(q[j] - q[j - 1]));

    std::vector<double> prev(k), cur(k);
    for (size_t j = 0; j < k; ++j) {
        double d = std::abs(p[0] - q[j]);
        prev[j] = (j == 0) ? d : std::max(prev[j - 1], d);
    }
    for (size_t i = 1; i < m; ++i) {
        for (size_t j = 0; j < k; ++j) {
            double d = std::abs(p[i] - q[j]);
            double reach;
            if (j == 0) {
                reach = prev[0];
            } else {
                reach = std::min({prev[j], prev[j - 1], cur[j - 1]});
            }
            cur[j] = std::max(reach, d);
        }
        std::swap(prev, cur);
    }
    return {prev[k - 1], max_seg};
}

double dist_rho(const Curve& g1, const Curve& g2) {
    return dist_rho_with_error(g1, g2).value;
}

CurveMeasurePair map_T(const Curve& curve, double resolution) {
    curve.validate();
    if (!(resolution > 0.0))
        throw PreconditionError("map_T: resolution must be > 0");
    std::vector<MeasureAtom> atoms;
    for (size_t i = 1; i < curve.vertices.size(); ++i) {
        Complex a = curve.vertices[i - 1];
        Complex b = curve.vertices[i];
        double duration = curve.times[i] - curve.times[i - 1];
        double len = std::abs(b - a);
        size_t pieces =
            len > 0.0 ? size_t(std::ceil(len / resolution)) : size_t(1);
        double piece_mass = duration / double(pieces);
        for (size_t s = 0; s < pieces; ++s) {
            MeasureAtom atom;
            double w0 = double(s) / double(pieces);
            double w1 = double(s + 1) / double(pieces);
            atom.a = a + w0 * (b - a);
            atom.b = a + w1 * (b - a);
            atom.mass = piece_mass;
            atoms.push_back(atom);
        }
    }
    if (atoms.empty()) {
        // constant curve: all mass sits at the single point
        MeasureAtom atom;
        atom.a = atom.b = curve.vertices.front();
        atom.mass = curve.lifetime();
        if (atom.mass > 0.0) atoms.push_back(atom);
    }
    return {CurveClass(curve), OccupationMeasure(std::move(atoms))};
}

namespace {

// Arclength parameter of the nearest point of the polyline, plus distance.
struct Projection {
    double s;
    double dist;
};

Projection project_to_chain(const std::vector<Complex>& chain,
                            const std::vector<double>& arclen, Complex p) {
    Projection best{0.0, std::abs(p - chain[0])};
    for (size_t i = 1; i < chain.size(); ++i) {
        Complex a = chain[i - 1], b = chain[i];
        Complex ab = b - a;
        double len2 = std::norm(ab);
        double t = 0.0;
        if (len2 > 0.0) {
            t = ((p.real() - a.real()) * ab.real() +
                 (p.imag() - a.imag()) * ab.imag()) /
                len2;
            t = std::clamp(t, 0.0, 1.0);
        }
        Complex q = a + t * ab;
        double d = std::abs(p - q);
        if (d < best.dist) {
            best.dist = d;
            best.s = arclen[i - 1] + t * std::sqrt(len2);
        }
    }
    return best;
}

} // namespace

Curve map_S(const CurveClass& cls, const OccupationMeasure& mu,
            double support_tol) {
    if (!(mu.total_mass() > 0.0))
        throw PreconditionError("map_S: measure must have positive mass");
    const Curve& rep = cls.representative();
    const auto& chain = rep.vertices;
    std::vector<double> arclen(chain.size(), 0.0);
    for (size_t i = 1; i < chain.size(); ++i)
        arclen[i] = arclen[i - 1] + std::abs(chain[i] - chain[i - 1]);
    double total_len = arclen.back();

    // accumulate interval densities and point masses along arclength
    std::map<double, double> jumps;            // s -> point mass
    std::map<double, double> density_deltas;   // difference array
    for (const auto& atom : mu.atoms()) {
        if (atom.mass == 0.0) continue;
        Projection pa = project_to_chain(chain, arclen, atom.a);
        Projection pb = project_to_chain(chain, arclen, atom.b);
        if (pa.dist > support_tol || pb.dist > support_tol)
            throw SupportMismatch("map_S: atom farther than tolerance from trace");
        double s1 = std::min(pa.s, pb.s), s2 = std::max(pa.s, pb.s);
        if (s2 - s1 <= 1e-15 * std::max(1.0, total_len)) {
            jumps[0.5 * (s1 + s2)] += atom.mass;
        } else {
            double d = atom.mass / (s2 - s1);
            density_deltas[s1] += d;
            density_deltas[s2] -= d;
        }
    }

    // breakpoints: ends, atom endpoints, jump locations, chain vertices
    std::vector<double> brk;
    brk.push_back(0.0);
    brk.push_back(total_len);
    for (auto& [s, d] : density_deltas) brk.push_back(s);
    for (auto& [s, m] : jumps) brk.push_back(s);
    for (double s : arclen) brk.push_back(s);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end(),
                          [&](double a, double b) {
                              return b - a <= 1e-15 * std::max(1.0, total_len);
                          }),
              brk.end());

    auto point_at = [&](double s) -> Complex {
        s = std::clamp(s, 0.0, total_len);
        if (total_len == 0.0) return chain.front();
        size_t hi = size_t(std::upper_bound(arclen.begin(), arclen.end(), s) -
                           arclen.begin());
        if (hi >= arclen.size()) return chain.back();
        if (hi == 0) return chain.front();
        size_t lo = hi - 1;
        double span = arclen[hi] - arclen[lo];
        double w = span > 0.0 ? (s - arclen[lo]) / span : 0.0;
        return chain[lo] + w * (chain[hi] - chain[lo]);
    };

    double jump_eps = std::max(1.0, mu.total_mass()) * 1e-12;
    Curve out;
    out.vertices.push_back(point_at(0.0));
    out.times.push_back(0.0);
    auto append = [&](Complex v, double dt) {
        out.vertices.push_back(v);
        out.times.push_back(out.times.back() + dt);
    };

    double density = 0.0;
    auto delta_it = density_deltas.begin();
    double tol = 1e-15 * std::max(1.0, total_len);
    for (size_t k = 0; k < brk.size(); ++k) {
        double s = brk[k];
        // point mass: the curve waits at eta(s)
        for (auto& [sj, m] : jumps) {
            if (std::abs(sj - s) <= tol && m > 0.0) {
                append(point_at(s), m);
                m = 0.0;
            }
        }
        while (delta_it != density_deltas.end() && delta_it->first <= s + tol) {
            density += delta_it->second;
            ++delta_it;
        }
        if (k + 1 < brk.size()) {
            double s_next = brk[k + 1];
            double dm = density * (s_next - s);
            if (dm > 0.0) {
                append(point_at(s_next), dm);
            } else {
                // zero-mass arc: the right-continuous inverse jumps past it
                append(point_at(s_next), jump_eps);
            }
        }
    }
    return out;
}

} // namespace lerw
