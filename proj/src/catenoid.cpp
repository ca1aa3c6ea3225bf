#include "hxr/catenoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hxr/errors.hpp"
#include "hxr/geometry.hpp"

namespace hxr {

namespace {

// Upper limit in v-coordinates of the substituted integrals: x = rho
// corresponds to v = acosh(sinh(rho)/d).
double v_limit(double d, double rho) {
    const double r = std::sinh(rho) / d;
    if (r <= 1.0) return 0.0;
    return std::acosh(r);
}

} // namespace

CatenoidParam::CatenoidParam(double d_) : d(d_) {
    if (!(d > 0.0)) throw PreconditionError("CatenoidParam: d must be > 0");
}

double CatenoidParam::girth_radius() const { return std::asinh(d); }

QuadratureResult lambda(const CatenoidParam& cp, double rho) {
    const double d = cp.d;
    const double g = cp.girth_radius();
    if (rho < g - 1e-15) throw PreconditionError("lambda: rho below girth radius");
    if (rho <= g) return {0.0, 0.0, 0};
    const double V = v_limit(d, rho);
    auto f = [d](double v) {
        const double c = d * std::cosh(v);
        return d / std::sqrt(1.0 + c * c);
    };
    return integrate_gk(f, 0.0, V, 1e-13);
}

QuadratureResult lambda_alt(const CatenoidParam& cp, double rho) {
    const double d = cp.d;
    const double g = cp.girth_radius();
    if (rho < g - 1e-15) throw PreconditionError("lambda_alt: rho below girth radius");
    if (rho <= g) return {0.0, 0.0, 0};
    const double u0 = std::sqrt(1.0 + d * d);
    const double U = std::cosh(rho);
    const double w = std::min(1.0, 0.5 * (U - u0));
    // near the girth: u = u0 + s^2 removes the 1/sqrt(u - u0) factor
    auto near = [d, u0](double s) {
        const double u = u0 + s * s;
        return 2.0 * d / (std::sqrt(u + u0) * std::sqrt(u * u - 1.0));
    };
    QuadratureResult a = integrate_gk(near, 0.0, std::sqrt(w), 1e-13);
    QuadratureResult b{0.0, 0.0, 0};
    if (U > u0 + w) {
        auto far = [d, u0](double u) {
            return d / (std::sqrt(u * u - u0 * u0) * std::sqrt(u * u - 1.0));
        };
        b = integrate_gk(far, u0 + w, U, 1e-13);
    }
    return {a.value + b.value, a.err_est + b.err_est, a.evaluations + b.evaluations};
}

QuadratureResult height_limit(const CatenoidParam& cp) {
    const double d = cp.d;
    const double X = std::max(50.0, cp.girth_radius() + 40.0);
    QuadratureResult r = lambda(cp, X);
    const double tail = 2.0 * d * std::exp(-X) / (1.0 - std::exp(-2.0 * X));
    r.err_est += tail;
    return r;
}

QuadratureResult slice_integral(const CatenoidParam& cp, double rho) {
    const double d = cp.d;
    const double g = cp.girth_radius();
    if (rho < g - 1e-15) throw PreconditionError("slice_integral: rho below girth radius");
    if (rho <= g) return {0.0, 0.0, 0};
    const double V = v_limit(d, rho);
    auto f = [d](double v) {
        const double c = d * std::cosh(v);
        return c * c / std::sqrt(1.0 + c * c);
    };
    return integrate_gk(f, 0.0, V, 1e-13);
}

QuadratureResult slice_integral_alt(const CatenoidParam& cp, double rho) {
    const double d = cp.d;
    const double g = cp.girth_radius();
    if (rho < g - 1e-15) throw PreconditionError("slice_integral_alt: rho below girth radius");
    if (rho <= g) return {0.0, 0.0, 0};
    const double u0 = std::sqrt(1.0 + d * d);
    const double U = std::cosh(rho);
    const double w = std::min(1.0, 0.5 * (U - u0));
    auto near = [u0](double s) {
        const double u = u0 + s * s;
        return 2.0 * std::sqrt(u * u - 1.0) / std::sqrt(u + u0);
    };
    QuadratureResult a = integrate_gk(near, 0.0, std::sqrt(w), 1e-13);
    QuadratureResult b{0.0, 0.0, 0};
    if (U > u0 + w) {
        auto far = [u0](double u) {
            return std::sqrt(u * u - 1.0) / std::sqrt(u * u - u0 * u0);
        };
        b = integrate_gk(far, u0 + w, U, 1e-13);
    }
    return {a.value + b.value, a.err_est + b.err_est, a.evaluations + b.evaluations};
}

QuadratureResult slice_area(const CatenoidParam& cp, double rho) {
    QuadratureResult r = slice_integral(cp, rho);
    r.value *= 4.0 * kPi;
    r.err_est *= 4.0 * kPi;
    return r;
}

double area_margin(const CatenoidParam& cp, double rho) {
    const double d = cp.d;
    const double g = cp.girth_radius();
    if (rho < g - 1e-15) throw PreconditionError("area_margin: rho below girth radius");
    // I = (cosh rho - cosh g) + J with J below, so
    //   2*disk - slice = 4*pi*(cosh g - 1 - J)
    // which avoids the cosh(rho)-sized cancellation entirely.
    double J = 0.0;
    if (rho > g) {
        const double V = v_limit(d, rho);
        auto f = [d](double v) {
            const double c = d * std::cosh(v);
            return d * c * std::exp(-v) / std::sqrt(1.0 + c * c);
        };
        J = integrate_gk(f, 0.0, V, 1e-13).value;
    }
    return 4.0 * kPi * (std::sqrt(1.0 + d * d) - 1.0 - J);
}

double rho_hat(const CatenoidParam& cp) {
    if (!(cp.d > 1.0)) throw PreconditionError("rho_hat: requires d > 1");
    return 1.5 * std::log(cp.d);
}

double rho_star(const CatenoidParam& cp) {
    if (!(cp.d > 1.0)) throw PreconditionError("rho_star: requires d > 1");
    double lo = cp.girth_radius();
    double hi = 4.0 * std::log(cp.d);
    if (hi <= lo) return std::numeric_limits<double>::infinity();
    if (area_margin(cp, hi) >= 0.0) return std::numeric_limits<double>::infinity();
    // margin(lo) = 2*disk_area(girth) > 0, margin(hi) < 0
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (area_margin(cp, mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

QuadratureResult h_hat(const CatenoidParam& cp) {
    return lambda(cp, rho_hat(cp));
}

double intersection_rho(const CatenoidParam& d1, const CatenoidParam& d2) {
    if (!(d1.d < d2.d)) throw PreconditionError("intersection_rho: requires d1 < d2");
    const double lo0 = d2.girth_radius();
    auto diff = [&](double r) { return lambda(d1, r).value - lambda(d2, r).value; };
    // lambda_{d1}(asinh d2) > 0 = lambda_{d2}(asinh d2), and the limits
    // satisfy h(d1) < h(d2), so a sign change exists.
    double lo = lo0 + 1e-9 * std::max(1.0, lo0);
    double flo = diff(lo);
    if (flo <= 0.0) throw NumericalError("intersection_rho: bracket start not positive");
    double step = 0.5;
    double hi = lo;
    double fhi = flo;
    while (fhi > 0.0) {
        hi += step;
        step *= 1.6;
        if (hi > lo0 + 100.0) throw NumericalError("intersection_rho: no sign change within range");
        fhi = diff(hi);
    }
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (diff(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// linear-in-delta extrapolation from the last two ladder entries
double extrapolate_linear(const std::vector<double>& deltas, const std::vector<double>& vals) {
    const size_t n = vals.size();
    if (n == 1) return vals[0];
    const double d1 = deltas[n - 2], d2 = deltas[n - 1];
    return (vals[n - 2] * d2 - vals[n - 1] * d1) / (d2 - d1);
}

} // namespace

IotaResult iota(const CatenoidParam& cp, const std::vector<double>& deltas, double gap_threshold) {
    if (deltas.empty()) throw PreconditionError("iota: empty delta ladder");
    for (size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw PreconditionError("iota: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1])) throw PreconditionError("iota: deltas must decrease");
    }
    IotaResult r;
    for (double delta : deltas) {
        r.plus_seq.push_back(intersection_rho(cp, CatenoidParam(cp.d * (1.0 + delta))));
        r.minus_seq.push_back(intersection_rho(CatenoidParam(cp.d * (1.0 - delta)), cp));
    }
    r.plus_limit = extrapolate_linear(deltas, r.plus_seq);
    r.minus_limit = extrapolate_linear(deltas, r.minus_seq);
    r.gap = std::abs(r.plus_limit - r.minus_limit);
    r.value = 0.5 * (r.plus_limit + r.minus_limit);
    r.flagged = r.gap > gap_threshold;
    return r;
}

I1Report i1_bound_check(const CatenoidParam& cp) {
    const double d = cp.d;
    I1Report rep;
    rep.i1 = slice_integral(cp, std::asinh(d + 1.0)).value;
    rep.bound = (d + 1.0) * std::log((std::sqrt(1.0 + (d + 1.0) * (d + 1.0)) + std::sqrt(2.0 * d + 1.0)) / std::sqrt(1.0 + d * d));
    rep.ratio_sqrt_2d = rep.bound / std::sqrt(2.0 * d);
    rep.holds = rep.i1 < rep.bound;
    return rep;
}

CatenoidProfile::CatenoidProfile(const CatenoidParam& cp, double rho_max, int samples) : d_(cp.d), girth_(cp.girth_radius()) {
    if (rho_max <= girth_) throw PreconditionError("CatenoidProfile: rho_max below girth");
    if (samples < 8) samples = 8;
    rho_.reserve(samples);
    lam_.reserve(samples);
    // cluster samples near the girth where lambda varies like sqrt(rho - girth)
    for (int i = 0; i < samples; ++i) {
        const double s = static_cast<double>(i) / (samples - 1);
        const double r = girth_ + (rho_max - girth_) * s * s;
        rho_.push_back(r);
        lam_.push_back(lambda(cp, r).value);
    }
}

double CatenoidProfile::lambda_at(double rho) const {
    if (rho <= rho_.front()) return 0.0;
    if (rho >= rho_.back()) return lam_.back();
    auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
    const size_t j = static_cast<size_t>(it - rho_.begin());
    const double w = (rho - rho_[j - 1]) / (rho_[j] - rho_[j - 1]);
    return lam_[j - 1] + w * (lam_[j] - lam_[j - 1]);
}

double CatenoidProfile::rho_at_lambda(double lam) const {
    if (lam <= 0.0) return girth_;
    if (lam >= lam_.back()) return rho_.back();
    auto it = std::upper_bound(lam_.begin(), lam_.end(), lam);
    const size_t j = static_cast<size_t>(it - lam_.begin());
    const double w = (lam - lam_[j - 1]) / (lam_[j] - lam_[j - 1]);
    return rho_[j - 1] + w * (rho_[j] - rho_[j - 1]);
}

} // namespace hxr
