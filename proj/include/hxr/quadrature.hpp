#pragma once

#include <cstdint>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hxr {

struct QuadratureResult {
    double value = 0.0;
    double err_est = 0.0;
    std::int64_t evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval. The integrand is
// expected to be smooth; endpoint singularities must be removed by a
// substitution before calling.
template <typename F>
QuadratureResult integrate_gk(F&& f, double a, double b, double tol = 1e-12, int max_depth = 15) {
    std::int64_t evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(counted, a, b, max_depth, tol, &err);
    return {v, err, evals};
}

} // namespace hxr
