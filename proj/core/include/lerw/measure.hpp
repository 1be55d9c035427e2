#ifndef LERW_MEASURE_HPP
#define LERW_MEASURE_HPP

#include <cstdint>
#include <vector>

#include "lerw/lattice.hpp"
#include "lerw/walk.hpp"

namespace lerw {

// One atom of an occupation measure: a segment (or point, when a == b)
// carrying nonnegative mass in time units. Mass is understood to be spread
// uniformly along the segment; `representative()` is the point used by the
// set-function approximations.
struct MeasureAtom {
    Complex a;
    Complex b;
    double mass = 0.0;

    Complex representative() const { return 0.5 * (a + b); }
    double length() const { return std::abs(b - a); }
};

// Finite positive measure supported on segments/points. Immutable after
// construction; total mass is a compensated sum cached at build time.
class OccupationMeasure {
  public:
    OccupationMeasure() = default;
    explicit OccupationMeasure(std::vector<MeasureAtom> atoms);

    const std::vector<MeasureAtom>& atoms() const { return atoms_; }
    double total_mass() const { return total_mass_; }
    bool empty() const { return atoms_.empty(); }

  private:
    std::vector<MeasureAtom> atoms_;
    double total_mass_ = 0.0;
};

// Occupation measure of the rescaled loop-erased walk: each traversed edge
// becomes a segment of length 1/n carrying mass 1/c_n, so the total mass is
// M_n / c_n.
OccupationMeasure occupation_from_edges(const LerwSample& sample, int32_t n,
                                        double c_n);

// Mass of atoms whose representative point lies in the open ball B(z; eps).
double ball_mass(const OccupationMeasure& mu, Complex z, double eps);

// Dyadic-square test family: squares of side 2^-level tiling [-2,2]^2.
struct TestFamily {
    int level = 7;

    double side() const { return std::ldexp(1.0, -level); }
    static TestFamily dyadic(int level = 7);
};

struct LpBracket {
    double lower = 0.0;      // certified lower bound of d_LP
    double upper = 0.0;      // coupling (greedy matching) upper bound
    double resolution = 0.0; // family cell side
};

// Certified lower bound of the Levy-Prokhorov distance: bisection on eps,
// where each feasibility check searches greedily for a violating union of
// family squares. Atoms enter through their representative points.
double levy_prokhorov(const OccupationMeasure& mu, const OccupationMeasure& nu,
                      const TestFamily& family, double bisect_tol = 1e-6);

// Lower bound together with a greedy-coupling upper bound.
LpBracket levy_prokhorov_bracket(const OccupationMeasure& mu,
                                 const OccupationMeasure& nu,
                                 const TestFamily& family,
                                 double bisect_tol = 1e-6);

} // namespace lerw

#endif
