#include "lerw/green.hpp"

#include <cmath>

#include "lerw/errors.hpp"
#include "lerw/stats.hpp"

namespace lerw {

SleParams SleParams::make(double kappa) {
    if (!(kappa > 0.0 && kappa <= 4.0))
        throw PreconditionError("SleParams: require 0 < kappa <= 4");
    return SleParams{kappa};
}

ConformalMap ConformalMap::scaling(double r) {
    if (!(r > 0.0)) throw PreconditionError("ConformalMap: radius must be > 0");
    return ConformalMap(Kind::Scaling, r);
}

Complex ConformalMap::apply(Complex z) const {
    switch (kind_) {
        case Kind::Identity: return z;
        case Kind::Scaling: return z / param_;
        case Kind::Rotation: return std::polar(1.0, param_) * z;
    }
    return z;
}

Complex ConformalMap::derivative(Complex z) const {
    (void)z;
    switch (kind_) {
        case Kind::Identity: return {1.0, 0.0};
        case Kind::Scaling: return {1.0 / param_, 0.0};
        case Kind::Rotation: return std::polar(1.0, param_);
    }
    return {1.0, 0.0};
}

double green_disk(Complex z, SleParams params) {
    double r = std::abs(z);
    if (r == 0.0) throw SingularAtOrigin("green_disk: z = 0");
    if (r > 1.0 + 1e-12)
        throw PreconditionError("green_disk: point outside the closed disk");
    return std::pow(r, params.dimension() - 2.0);
}

double green_domain(Complex z, const ConformalMap& map, SleParams params) {
    Complex w = map.apply(z);
    if (std::abs(w) == 0.0) throw SingularAtOrigin("green_domain: z maps to 0");
    double ratio = std::abs(map.derivative(z) / w);
    return std::pow(ratio, 2.0 - params.dimension());
}

RiemannSum riemann_sum(const std::function<double(Complex)>& fn,
                       const GridDomain& dom, double r_min, double r_max) {
    if (!(r_min >= 0.0 && r_max > r_min))
        throw PreconditionError("riemann_sum: bad annulus");
    double n = double(dom.scale());
    double inner_cut = 0.0;
    bool contains_origin = r_min == 0.0;
    if (contains_origin) inner_cut = 0.5 / n * (1.0 + 1e-12);

    CompensatedSum sum;
    size_t used = 0, excluded = 0;
    for (const auto& e : dom.interior_edges()) {
        Complex mid = e.midpoint() / n;
        double r = std::abs(mid);
        if (r < r_min || r > r_max) continue;
        if (contains_origin && r <= inner_cut) {
            ++excluded;
            continue;
        }
        sum.add(fn(mid));
        ++used;
    }
    RiemannSum out;
    out.value = sum.value() / (2.0 * n * n);
    out.edges_used = used;
    out.excluded_edges = excluded;
    return out;
}

} // namespace lerw
