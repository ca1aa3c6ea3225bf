#pragma once

// Rotational minimal catenoids C_d in H^2 x R. C_d is the rotation of the
// profile graph z = +/- lambda_d(rho) about the vertical axis, where
//
//   lambda_d(rho) = \int_{asinh d}^{rho} d / sqrt(sinh^2 x - d^2) dx,
//
// defined for rho >= asinh(d) (the girth radius). The integrand has an
// inverse-square-root singularity at the girth which every routine here
// removes by substitution before quadrature.

#include <vector>

#include "hxr/quadrature.hpp"

namespace hxr {

struct CatenoidParam {
    double d = 1.0; // neck parameter, > 0

    explicit CatenoidParam(double d_);
    double girth_radius() const; // asinh(d)
};

// Profile integral lambda_d(rho). Primary route: x = asinh(d*cosh v),
// which turns the integrand into d / sqrt(1 + d^2 cosh^2 v).
QuadratureResult lambda(const CatenoidParam& d, double rho);

// Independent route for cross-validation: u = cosh x with the remaining
// endpoint singularity split off by u = u0 + s^2.
QuadratureResult lambda_alt(const CatenoidParam& d, double rho);

// Half-height of the complete catenoid, h(d) = lim_{rho->inf} lambda_d(rho).
// Truncated at X = max(50, asinh d + 40); the analytic tail bound
// 2 d e^{-X} / (1 - e^{-2X}) is added to err_est.
QuadratureResult height_limit(const CatenoidParam& d);

// I(d, rho) = \int_{asinh d}^{rho} sinh^2 x / sqrt(sinh^2 x - d^2) dx.
// The compact slice between heights +/- lambda_d(rho) has area 4*pi*I.
QuadratureResult slice_integral(const CatenoidParam& d, double rho);
QuadratureResult slice_integral_alt(const CatenoidParam& d, double rho);

QuadratureResult slice_area(const CatenoidParam& d, double rho); // 4*pi*I

// 2 * disk_area(rho) - slice_area(d, rho): positive means the compact
// catenoid slice beats the two competing disks. Evaluated in the
// cancellation-free form 4*pi*(sqrt(1+d^2) - 1 - J(d,rho)) with
// J = I - (cosh rho - cosh(asinh d)), so it stays meaningful when both
// areas are exponentially large.
double area_margin(const CatenoidParam& d, double rho);

// (3/2) * ln d, natural log. Requires d > 1.
double rho_hat(const CatenoidParam& d);

// Largest rho with area_margin >= 0, by bisection on [asinh d, 4 ln d]
// to 1e-6. Returns +infinity when the margin does not change sign there.
double rho_star(const CatenoidParam& d);

// lambda_d(rho_hat(d)), the half-height of the certified slice.
QuadratureResult h_hat(const CatenoidParam& d);

// Unique crossing radius of the profiles lambda_{d1} and lambda_{d2}
// (d1 < d2) past asinh(d2), bracketed and bisected to 1e-8.
double intersection_rho(const CatenoidParam& d1, const CatenoidParam& d2);

struct IotaResult {
    double value = 0.0;     // extrapolated common limit
    double plus_limit = 0.0;  // from t > d
    double minus_limit = 0.0; // from t < d
    double gap = 0.0;         // |plus_limit - minus_limit|
    bool flagged = false;     // gap exceeded the diagnostic threshold
    std::vector<double> plus_seq;
    std::vector<double> minus_seq;
};

// Intersection number iota(d): the common limit of the crossing radii of
// lambda_{d(1 +/- delta)} with lambda_d as delta -> 0, estimated from both
// sides over the given delta ladder with linear Richardson extrapolation.
IotaResult iota(const CatenoidParam& d, const std::vector<double>& deltas, double gap_threshold = 1e-3);

struct I1Report {
    double i1 = 0.0;            // integral over [asinh d, asinh(d+1)]
    double bound = 0.0;         // closed-form upper bound
    double ratio_sqrt_2d = 0.0; // bound / sqrt(2d)
    bool holds = false;         // i1 < bound
};

I1Report i1_bound_check(const CatenoidParam& d);

// Sampled profile for mesh generation and containment queries; rho is
// sampled so that lambda values are dense near the flat ends too.
class CatenoidProfile {
public:
    CatenoidProfile(const CatenoidParam& d, double rho_max, int samples = 512);

    double d() const { return d_; }
    double girth() const { return girth_; }
    double rho_max() const { return rho_.back(); }
    double half_height() const { return lam_.back(); }

    double lambda_at(double rho) const;     // monotone interpolation
    double rho_at_lambda(double lam) const; // inverse interpolation

private:
    double d_ = 0.0;
    double girth_ = 0.0;
    std::vector<double> rho_;
    std::vector<double> lam_;
};

} // namespace hxr
