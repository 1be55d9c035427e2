#ifndef LERW_CURVE_HPP
#define LERW_CURVE_HPP

#include <vector>

#include "lerw/lattice.hpp"
#include "lerw/measure.hpp"
#include "lerw/walk.hpp"

namespace lerw {

// Default spatial tolerances: lattice geometry is exact up to rounding,
// Loewner traces carry solver error.
inline constexpr double kLatticeTol = 1e-9;
inline constexpr double kLoewnerTol = 1e-6;

// Continuous piecewise-linear curve with explicit time parametrization.
// Evaluation is linear between vertices and sits at the final vertex after
// the lifetime.
struct Curve {
    std::vector<Complex> vertices;
    std::vector<double> times;

    double lifetime() const { return times.empty() ? 0.0 : times.back(); }
    Complex at(double t) const;
    void validate() const; // throws PreconditionError on broken invariants

    static Curve segment(Complex from, Complex to, double duration);
};

// Linear speed function sigma_n(t) = c_n t.
struct SpeedFunction {
    double c_n = 1.0;
};

// Equivalence class of curves modulo reparametrization, held as a canonical
// representative: duplicate vertices dropped, collinear forward runs merged,
// arclength-proportional parametrization on [0,1].
class CurveClass {
  public:
    explicit CurveClass(const Curve& curve);

    const Curve& representative() const { return rep_; }
    double trace_length() const { return length_; }

  private:
    Curve rep_;
    double length_ = 0.0;
};

// Y_n(t) = (1/n) X(sigma_n(t)): vertices are the sample's points divided by
// n (exit point first, origin last), one step per 1/c_n of time.
Curve embed_lerw(const LerwSample& sample, int32_t n, SpeedFunction speed);

// d(g1, g2) = |t1 - t2| + sup |g1(s) - g2(s)|; exact for piecewise-linear
// curves (the pointwise distance is convex between merged breakpoints).
double dist_sup(const Curve& g1, const Curve& g2);

struct RhoResult {
    double value = 0.0;
    double error_bound = 0.0; // one-sided: true rho in [value - bound, value]
};

// Monotone-coupling (discrete Frechet) upper approximation of the
// reparametrization metric rho, computed on canonical vertex chains.
RhoResult dist_rho_with_error(const Curve& g1, const Curve& g2);
double dist_rho(const Curve& g1, const Curve& g2);

struct CurveMeasurePair {
    CurveClass cls;
    OccupationMeasure measure;
};

// T: gamma -> (class, occupation measure). Segments longer than `resolution`
// are subdivided so every atom has length <= resolution; total mass equals
// the lifetime.
CurveMeasurePair map_T(const Curve& curve, double resolution);

// S: (class, measure) -> curve, via the cumulative mass function along the
// representative and its right-continuous inverse. Throws SupportMismatch
// when an atom sits farther than `support_tol` from the trace.
Curve map_S(const CurveClass& cls, const OccupationMeasure& mu,
            double support_tol = kLoewnerTol);

} // namespace lerw

#endif
