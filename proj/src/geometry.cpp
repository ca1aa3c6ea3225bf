#include "hxr/geometry.hpp"

#include <cmath>
#include <limits>

#include "hxr/errors.hpp"

namespace hxr {

double wrap_angle(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

HalfPlanePoint polar_to_halfplane(const PolarPoint& p) {
    if (p.rho < 0.0) throw PreconditionError("polar_to_halfplane: rho < 0");
    const double r = std::tanh(0.5 * p.rho); // Poincare disk radius
    const double u = r * std::cos(p.theta);
    const double v = r * std::sin(p.theta);
    const double n = (u + 1.0) * (u + 1.0) + v * v;
    return {2.0 * v / n, (1.0 - u * u - v * v) / n};
}

PolarPoint halfplane_to_polar(const HalfPlanePoint& p) {
    if (!(p.y > 0.0)) throw PreconditionError("halfplane_to_polar: y <= 0");
    const double n = p.x * p.x + (1.0 + p.y) * (1.0 + p.y);
    const double u = (1.0 - p.x * p.x - p.y * p.y) / n;
    const double v = 2.0 * p.x / n;
    const double r = std::hypot(u, v);
    // atanh is accurate for r < 1; r == 1 would be an ideal point.
    if (r >= 1.0) throw PreconditionError("halfplane_to_polar: ideal point");
    return {2.0 * std::atanh(r), std::atan2(v, u)};
}

ProductPoint product_point(const PolarPoint& base, double z) {
    const HalfPlanePoint h = polar_to_halfplane(base);
    return {h.x, h.y, z};
}

PolarPoint base_polar(const ProductPoint& p) {
    return halfplane_to_polar({p.x, p.y});
}

std::array<double, 2> angle_to_ideal(double theta) {
    return {std::sin(0.5 * theta), std::cos(0.5 * theta)};
}

double ideal_to_angle(double p, double q) {
    // two-argument arctangent keeps the seam at angle pi well-behaved
    double a = 2.0 * std::atan2(p, q);
    return wrap_angle(a);
}

double hyperbolic_distance(const HalfPlanePoint& a, const HalfPlanePoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double s = (dx * dx + dy * dy) / (2.0 * a.y * b.y);
    // cosh(d) = 1 + s, rewritten as d = 2*asinh(sqrt(s/2)) which stays
    // accurate for nearby points.
    return 2.0 * std::asinh(std::sqrt(0.5 * s));
}

double product_distance(const ProductPoint& a, const ProductPoint& b) {
    const double dh = hyperbolic_distance({a.x, a.y}, {b.x, b.y});
    return std::hypot(dh, a.z - b.z);
}

double disk_area(double rho) {
    if (rho < 0.0) throw PreconditionError("disk_area: rho < 0");
    return kTwoPi * (std::cosh(rho) - 1.0);
}

double distance_to_geodesic(const HalfPlanePoint& p, const Geodesic& g) {
    const auto ia = angle_to_ideal(g.angle_a);
    const auto ib = angle_to_ideal(g.angle_b);
    // Endpoints as x = p/q; q == 0 is the point at infinity (vertical line).
    const bool a_inf = std::abs(ia[1]) < 1e-15;
    const bool b_inf = std::abs(ib[1]) < 1e-15;
    if (a_inf && b_inf) throw PreconditionError("distance_to_geodesic: equal ideal endpoints");
    if (a_inf || b_inf) {
        const double xf = a_inf ? ib[0] / ib[1] : ia[0] / ia[1];
        return std::asinh(std::abs(p.x - xf) / p.y);
    }
    const double xa = ia[0] / ia[1];
    const double xb = ib[0] / ib[1];
    const double c = 0.5 * (xa + xb);
    const double r = 0.5 * std::abs(xb - xa);
    if (r <= 0.0) throw PreconditionError("distance_to_geodesic: equal ideal endpoints");
    const double q = (p.x - c) * (p.x - c) + p.y * p.y - r * r;
    return std::asinh(std::abs(q) / (2.0 * r * p.y));
}

Isometry::Isometry() = default;

Isometry::Isometry(const std::array<double, 4>& m, double dz, Kind kind) : m_(m), dz_(dz), kind_(kind) {}

Isometry Isometry::hyperbolic_dilation(double t, double source_angle, double sink_angle) {
    if (!(t > 0.0)) throw PreconditionError("hyperbolic_dilation: t must be > 0");
    const auto src = angle_to_ideal(source_angle);
    const auto snk = angle_to_ideal(sink_angle);
    // V has the attracting fixed point (for t > 1) in its first column.
    const double v00 = snk[0], v01 = src[0];
    const double v10 = snk[1], v11 = src[1];
    const double det = v00 * v11 - v01 * v10;
    if (std::abs(det) < 1e-14) throw PreconditionError("hyperbolic_dilation: coincident axis endpoints");
    // M = V * diag(t, 1) * V^{-1}
    const double a = (t * v00 * v11 - v01 * v10) / det;
    const double b = (v00 * v01 - t * v00 * v01) / det;
    const double c = (t * v10 * v11 - v11 * v10) / det;
    const double d = (v00 * v11 - t * v01 * v10) / det;
    return Isometry({a, b, c, d}, 0.0, Kind::HyperbolicDilation);
}

Isometry Isometry::vertical_translation(double dz) {
    return Isometry({1.0, 0.0, 0.0, 1.0}, dz, Kind::VerticalTranslation);
}

Isometry Isometry::rotation(double dtheta) {
    const double c = std::cos(0.5 * dtheta);
    const double s = std::sin(0.5 * dtheta);
    return Isometry({c, s, -s, c}, 0.0, Kind::Rotation);
}

Isometry Isometry::parabolic_normalization(double x0, double y0, double z0) {
    if (!(y0 > 0.0)) throw PreconditionError("parabolic_normalization: y0 must be > 0");
    return Isometry({1.0, -x0, 0.0, y0}, -z0, Kind::ParabolicNormalization);
}

Isometry Isometry::compose(const Isometry& inner) const {
    const auto& A = m_;
    const auto& B = inner.m_;
    std::array<double, 4> m = {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3],
                               A[2] * B[0] + A[3] * B[2], A[2] * B[1] + A[3] * B[3]};
    return Isometry(m, dz_ + inner.dz_, Kind::Composite);
}

Isometry Isometry::inverse() const {
    const double det = m_[0] * m_[3] - m_[1] * m_[2];
    std::array<double, 4> m = {m_[3] / det, -m_[1] / det, -m_[2] / det, m_[0] / det};
    return Isometry(m, -dz_, Kind::Composite);
}

HalfPlanePoint Isometry::apply(const HalfPlanePoint& p) const {
    const double a = m_[0], b = m_[1], c = m_[2], d = m_[3];
    const double den = (c * p.x + d) * (c * p.x + d) + c * c * p.y * p.y;
    if (den <= 0.0) throw NumericalError("Isometry::apply: degenerate Moebius image");
    const double det = a * d - b * c;
    const double nx = a * c * (p.x * p.x + p.y * p.y) + (a * d + b * c) * p.x + b * d;
    return {nx / den, det * p.y / den};
}

ProductPoint Isometry::apply(const ProductPoint& p) const {
    const HalfPlanePoint h = apply(HalfPlanePoint{p.x, p.y});
    return {h.x, h.y, p.z + dz_};
}

double Isometry::boundary_angle_action(double theta) const {
    const auto pq = angle_to_ideal(theta);
    const double np = m_[0] * pq[0] + m_[1] * pq[1];
    const double nq = m_[2] * pq[0] + m_[3] * pq[1];
    return ideal_to_angle(np, nq);
}

BoundaryPoint Isometry::boundary_action(const BoundaryPoint& b) const {
    return {boundary_angle_action(b.theta), b.t + dz_};
}

} // namespace hxr
