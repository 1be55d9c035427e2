#include "lerw/loewner.hpp"

#include <cmath>

#include "lerw/errors.hpp"

namespace lerw {

DrivingFunction sample_driving(double kappa, double T, double dt,
                               RngStream& rng, bool uniform_start) {
    if (!(kappa > 0.0)) throw PreconditionError("sample_driving: kappa <= 0");
    if (!(dt > 0.0) || !(T > 0.0))
        throw PreconditionError("sample_driving: need T, dt > 0");
    size_t steps = size_t(std::llround(T / dt));
    if (steps == 0) steps = 1;
    DrivingFunction d;
    d.kappa = kappa;
    d.dt = dt;
    d.seed = rng.seed();
    d.stream_index = rng.stream_index();
    d.uniform_start = uniform_start;
    d.theta.resize(steps + 1);
    double two_pi = 8.0 * std::atan(1.0);
    d.theta[0] = uniform_start ? two_pi * rng.next_double() : 0.0;
    double scale = std::sqrt(kappa * dt);
    for (size_t k = 1; k <= steps; ++k)
        d.theta[k] = d.theta[k - 1] + scale * rng.next_gaussian();
    return d;
}

DrivingFunction constant_driving(double T, double dt, double theta0) {
    if (!(dt > 0.0) || !(T > 0.0))
        throw PreconditionError("constant_driving: need T, dt > 0");
    size_t steps = size_t(std::llround(T / dt));
    if (steps == 0) steps = 1;
    DrivingFunction d;
    d.kappa = 0.0;
    d.dt = dt;
    d.theta.assign(steps + 1, theta0);
    return d;
}

namespace {

// One exact radial slit step: solves the radial Loewner equation over a
// step of capacity log(exp_dt) with constant driving u. Uses
// h(v) = v/(1+v)^2, which maps the disk onto C minus [1/4, inf); the point
// is swallowed exactly when exp_dt * h(w/u) lands on that ray.
inline Complex slit_forward(Complex w, Complex u, double exp_dt,
                            bool& swallowed) {
    Complex v = w / u;
    Complex onepv = 1.0 + v;
    if (std::norm(onepv) < 1e-28) return w; // antipode: fixed point
    Complex s = exp_dt * v / (onepv * onepv);
    Complex one_minus_4s = 1.0 - 4.0 * s;
    if (s.real() >= 0.25 &&
        std::abs(s.imag()) <= 1e-12 * (1.0 + std::abs(s.real()))) {
        swallowed = true;
        return w;
    }
    Complex q = std::sqrt(one_minus_4s);
    Complex v2 = 2.0 * s / (1.0 - 2.0 * s + q);
    return u * v2;
}

// Exact inverse of one slit step; maps the disk into itself, no blow-up.
inline Complex slit_inverse(Complex w, Complex u, double exp_neg_dt) {
    Complex v = w / u;
    Complex onepv = 1.0 + v;
    if (std::norm(onepv) < 1e-28) return w;
    Complex s = exp_neg_dt * v / (onepv * onepv);
    Complex q = std::sqrt(1.0 - 4.0 * s);
    Complex v2 = 2.0 * s / (1.0 - 2.0 * s + q);
    return u * v2;
}

inline Complex radial_rhs(Complex w, Complex u) {
    Complex denom = u - w;
    return w * (u + w) / denom;
}

} // namespace

LoewnerChain::LoewnerChain(DrivingFunction driving)
    : driving_(std::move(driving)) {
    if (driving_.theta.size() < 2)
        throw PreconditionError("LoewnerChain: driving needs >= 1 step");
    xi_.reserve(driving_.theta.size());
    for (double a : driving_.theta) xi_.push_back(std::polar(1.0, a));
    exp_dt_ = std::exp(driving_.dt);
    exp_neg_dt_ = std::exp(-driving_.dt);
}

RadialTrajectory LoewnerChain::solve(Complex z) const {
    RadialTrajectory out;
    out.dt = driving_.dt;
    out.values.reserve(driving_.steps() + 1);
    Complex w = z;
    out.values.push_back(w);
    for (size_t k = 0; k < driving_.steps(); ++k) {
        if (std::abs(xi_[k] - w) < kBlowupTol) {
            out.blown_up = true;
            out.blowup_time = double(k) * driving_.dt;
            return out;
        }
        bool swallowed = false;
        Complex next = slit_forward(w, xi_[k], exp_dt_, swallowed);
        if (swallowed) {
            out.blown_up = true;
            out.blowup_time = double(k + 1) * driving_.dt;
            return out;
        }
        w = next;
        out.values.push_back(w);
    }
    return out;
}

Complex LoewnerChain::map_forward(Complex z, size_t k, bool& blown) const {
    blown = false;
    Complex w = z;
    for (size_t j = 0; j < k; ++j) {
        if (std::abs(xi_[j] - w) < kBlowupTol) {
            blown = true;
            return w;
        }
        bool swallowed = false;
        w = slit_forward(w, xi_[j], exp_dt_, swallowed);
        if (swallowed) {
            blown = true;
            return w;
        }
    }
    return w;
}

Complex LoewnerChain::map_inverse(Complex w, size_t k) const {
    if (k > driving_.steps())
        throw PreconditionError("map_inverse: step beyond driving horizon");
    Complex z = w;
    for (size_t j = k; j-- > 0;) z = slit_inverse(z, xi_[j], exp_neg_dt_);
    return z;
}

Complex LoewnerChain::map_inverse_backward_flow(Complex w, size_t k,
                                                int substeps) const {
    if (k > driving_.steps())
        throw PreconditionError("backward_flow: step beyond driving horizon");
    if (substeps < 1) throw PreconditionError("backward_flow: substeps < 1");
    Complex z = w;
    double h = -driving_.dt / double(substeps); // integrate g backwards
    for (size_t j = k; j-- > 0;) {
        Complex u = xi_[j];
        for (int s = 0; s < substeps; ++s) {
            Complex k1 = radial_rhs(z, u);
            Complex k2 = radial_rhs(z + 0.5 * h * k1, u);
            Complex k3 = radial_rhs(z + 0.5 * h * k2, u);
            Complex k4 = radial_rhs(z + h * k3, u);
            z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return z;
}

TraceApprox trace_from_driving(const DrivingFunction& driving,
                               const TraceOptions& opt) {
    if (!(opt.offset > 0.0 && opt.offset < 1.0))
        throw PreconditionError("trace: offset must be in (0,1)");
    if (opt.stride == 0) throw PreconditionError("trace: stride must be >= 1");
    LoewnerChain chain(driving);
    double r = 1.0 - opt.offset;

    TraceApprox out;
    out.tag = opt.finite_lifetime ? TraceApprox::Tag::FiniteLifetime
                                  : TraceApprox::Tag::Capacity;
    Curve& c = out.curve;
    size_t steps = driving.steps();
    for (size_t k = 0;; k += opt.stride) {
        bool last = k >= steps;
        size_t kk = last ? steps : k;
        Complex tip = chain.map_inverse(r * driving.xi(kk), kk);
        double t = double(kk) * driving.dt;
        double time = opt.finite_lifetime ? t / (1.0 + t) : t;
        c.vertices.push_back(tip);
        c.times.push_back(time);
        if (last) break;
    }
    if (opt.finite_lifetime) {
        c.vertices.push_back({0.0, 0.0});
        c.times.push_back(1.0);
    }
    c.validate();
    return out;
}

TraceApprox sample_sle_trace(double kappa, double T, double dt, RngStream& rng,
                             const TraceOptions& opt, bool uniform_start) {
    DrivingFunction d = sample_driving(kappa, T, dt, rng, uniform_start);
    return trace_from_driving(d, opt);
}

MartingaleSeries martingale_observable(const LoewnerChain& chain, Complex z,
                                       SleParams params, double diff_step) {
    if (std::abs(z) == 0.0)
        throw SingularAtOrigin("martingale_observable: z = 0");
    if (!(std::abs(z) < 1.0))
        throw PreconditionError("martingale_observable: need |z| < 1");
    double h = diff_step;
    RadialTrajectory center = chain.solve(z);
    RadialTrajectory right = chain.solve(z + Complex{h, 0.0});
    RadialTrajectory left = chain.solve(z - Complex{h, 0.0});
    RadialTrajectory up = chain.solve(z + Complex{0.0, h});
    RadialTrajectory down = chain.solve(z - Complex{0.0, h});

    size_t valid = std::min({center.values.size(), right.values.size(),
                             left.values.size(), up.values.size(),
                             down.values.size()});
    MartingaleSeries out;
    out.blown_up = center.blown_up;
    out.blowup_time = center.blowup_time;
    out.times.reserve(valid);
    out.values.reserve(valid);
    double exponent = 2.0 - params.dimension();
    for (size_t k = 0; k < valid; ++k) {
        Complex d_real = (right.values[k] - left.values[k]) / (2.0 * h);
        Complex d_imag = (up.values[k] - down.values[k]) / (2.0 * h);
        // for holomorphic g, g' = dg/dx = -i dg/dy; average both stencils
        Complex gp = 0.5 * (d_real - Complex{0.0, 1.0} * d_imag);
        double deriv_mag = std::abs(gp);
        double g_mag = std::abs(center.values[k]);
        if (g_mag == 0.0) break;
        out.times.push_back(double(k) * chain.driving().dt);
        out.values.push_back(std::pow(deriv_mag, exponent) *
                             std::pow(g_mag, params.dimension() - 2.0));
    }
    return out;
}

} // namespace lerw
