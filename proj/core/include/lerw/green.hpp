#ifndef LERW_GREEN_HPP
#define LERW_GREEN_HPP

#include <functional>

#include "lerw/lattice.hpp"

namespace lerw {

// SLE parameter set restricted to the simple-curve regime.
struct SleParams {
    double kappa = 2.0;

    double dimension() const { return 1.0 + kappa / 8.0; }
    static SleParams make(double kappa);
};

// Small closed-form catalog of conformal maps onto the unit disk fixing 0.
class ConformalMap {
  public:
    enum class Kind { Identity, Scaling, Rotation };

    static ConformalMap identity() { return ConformalMap(Kind::Identity, 0.0); }
    // z -> z / r, from the disk of radius r onto the unit disk
    static ConformalMap scaling(double r);
    // z -> e^{i theta} z
    static ConformalMap rotation(double theta) {
        return ConformalMap(Kind::Rotation, theta);
    }

    Complex apply(Complex z) const;
    Complex derivative(Complex z) const;
    Kind kind() const { return kind_; }

  private:
    ConformalMap(Kind kind, double param) : kind_(kind), param_(param) {}
    Kind kind_;
    double param_;
};

// G_D(z) = |z|^{d-2} on the unit disk (uniform boundary start). Throws
// SingularAtOrigin at z = 0.
double green_disk(Complex z, SleParams params);

// Conformal covariance: G_D(z) = |phi'(z)|^{2-d} G_D(phi(z)) = |phi'/phi|^{2-d}.
double green_domain(Complex z, const ConformalMap& map, SleParams params);

struct RiemannSum {
    double value = 0.0;
    size_t edges_used = 0;
    size_t excluded_edges = 0; // cells dropped around the origin singularity
};

// (1 / 2n^2) sum of fn(z_e) over interior edges of `dom` whose rescaled
// midpoint lies in the annulus r_min <= |z_e| <= r_max. When the region
// includes the origin, the innermost ring of edge cells (midpoints at
// distance 1/(2n)) is excluded and reported.
RiemannSum riemann_sum(const std::function<double(Complex)>& fn,
                       const GridDomain& dom, double r_min, double r_max);

} // namespace lerw

#endif
