#pragma once

// Models of H^2 and H^2 x R used throughout: upper half-plane chart,
// polar (rho, theta) coordinates about a fixed origin, and the boundary
// cylinder S^1 x R at infinity.
//
// Conventions:
//   - the polar origin is the half-plane point (0, 1);
//   - boundary angle phi corresponds to the half-plane boundary point
//     x = tan(phi/2), so phi = 0 maps to x = 0 and phi = pi to infinity;
//   - the product metric is ds^2 = drho^2 + sinh^2(rho) dtheta^2 + dz^2.

#include <array>
#include <cmath>
#include <numbers>

namespace hxr {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angle normalized into [0, 2*pi).
double wrap_angle(double theta);

struct HalfPlanePoint {
    double x = 0.0;
    double y = 1.0; // must stay > 0
};

struct PolarPoint {
    double rho = 0.0; // hyperbolic distance from the origin, >= 0
    double theta = 0.0;
};

// Point of the boundary cylinder S^1 x R.
struct BoundaryPoint {
    double theta = 0.0; // stored in [0, 2*pi)
    double t = 0.0;
};

// Point of H^2 x R in the half-plane chart (x, y, z), y > 0.
struct ProductPoint {
    double x = 0.0;
    double y = 1.0;
    double z = 0.0;
};

HalfPlanePoint polar_to_halfplane(const PolarPoint& p);
PolarPoint halfplane_to_polar(const HalfPlanePoint& p);

ProductPoint product_point(const PolarPoint& base, double z);
PolarPoint base_polar(const ProductPoint& p);

// Boundary angle <-> half-plane ideal point, as a projective pair (p, q)
// with x = p/q; the angle pi maps to (1, 0).
std::array<double, 2> angle_to_ideal(double theta);
double ideal_to_angle(double p, double q);

double hyperbolic_distance(const HalfPlanePoint& a, const HalfPlanePoint& b);
double product_distance(const ProductPoint& a, const ProductPoint& b);

// Area of the hyperbolic disk of radius rho: 2*pi*(cosh(rho) - 1).
double disk_area(double rho);

// Geodesic of H^2 given by its two ideal endpoint angles.
struct Geodesic {
    double angle_a = 0.0;
    double angle_b = 0.0;
};

double distance_to_geodesic(const HalfPlanePoint& p, const Geodesic& g);

// Orientation-preserving isometry of H^2 x R that the paper uses:
// a real Moebius map on the half-plane factor plus a vertical shift.
class Isometry {
public:
    enum class Kind { Identity, HyperbolicDilation, VerticalTranslation, Rotation, ParabolicNormalization, Composite };

    Isometry(); // identity

    // Conjugate of x -> t*x moving points away from `source` toward `sink`
    // along the geodesic with those ideal endpoints (t > 1 pushes toward
    // sink; t in (0,1) pushes back). Axis endpoints are fixed.
    static Isometry hyperbolic_dilation(double t, double source_angle, double sink_angle);
    static Isometry vertical_translation(double dz);
    // Rotation about the polar origin by dtheta.
    static Isometry rotation(double dtheta);
    // (x, y, z) -> ((x - x0)/y0, y/y0, z - z0).
    static Isometry parabolic_normalization(double x0, double y0, double z0);

    Kind kind() const { return kind_; }
    double dz() const { return dz_; }

    Isometry compose(const Isometry& inner) const; // this after inner
    Isometry inverse() const;

    ProductPoint apply(const ProductPoint& p) const;
    HalfPlanePoint apply(const HalfPlanePoint& p) const;

    // Induced map on the boundary cylinder.
    BoundaryPoint boundary_action(const BoundaryPoint& b) const;
    double boundary_angle_action(double theta) const;

private:
    Isometry(const std::array<double, 4>& m, double dz, Kind kind);

    // Row-major 2x2 real matrix acting as z -> (az + b)/(cz + d).
    std::array<double, 4> m_ = {1.0, 0.0, 0.0, 1.0};
    double dz_ = 0.0;
    Kind kind_ = Kind::Identity;
};

} // namespace hxr
