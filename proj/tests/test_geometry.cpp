#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hxr/errors.hpp"
#include "hxr/geometry.hpp"

using namespace hxr;

namespace {

std::mt19937 rng(20260810u);

PolarPoint random_polar(double rho_max = 4.0) {
    std::uniform_real_distribution<double> ur(0.0, rho_max);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi);
    return {ur(rng), ua(rng)};
}

ProductPoint random_product(double rho_max = 4.0, double z_max = 5.0) {
    std::uniform_real_distribution<double> uz(-z_max, z_max);
    return product_point(random_polar(rho_max), uz(rng));
}

Isometry random_isometry() {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi);
    std::uniform_real_distribution<double> ut(0.2, 5.0);
    std::uniform_real_distribution<double> uz(-3.0, 3.0);
    switch (kind(rng)) {
        case 0: {
            double a = ua(rng);
            double b = wrap_angle(a + 0.3 + 0.5 * ua(rng));
            return Isometry::hyperbolic_dilation(ut(rng), a, b);
        }
        case 1: return Isometry::vertical_translation(uz(rng));
        case 2: return Isometry::rotation(ua(rng));
        default: return Isometry::parabolic_normalization(uz(rng), ut(rng), uz(rng));
    }
}

} // namespace

TEST_CASE("polar origin is the half-plane point (0,1)") {
    HalfPlanePoint h = polar_to_halfplane({0.0, 0.7});
    CHECK(h.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(h.y == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("model conversion round-trips to 1e-12") {
    for (int i = 0; i < 200; ++i) {
        PolarPoint p = random_polar();
        PolarPoint q = halfplane_to_polar(polar_to_halfplane(p));
        HalfPlanePoint a = polar_to_halfplane(p);
        HalfPlanePoint b = polar_to_halfplane(q);
        CHECK(hyperbolic_distance(a, b) < 1e-12);
    }
}

TEST_CASE("conversion preserves hyperbolic distance") {
    // polar (rho, theta) distance from the origin must equal rho
    for (int i = 0; i < 100; ++i) {
        PolarPoint p = random_polar();
        HalfPlanePoint h = polar_to_halfplane(p);
        CHECK(hyperbolic_distance(h, {0.0, 1.0}) == doctest::Approx(p.rho).epsilon(1e-11));
    }
    // polar distance identity: cosh d = cosh r1 cosh r2 - sinh r1 sinh r2 cos(dtheta)
    for (int i = 0; i < 100; ++i) {
        PolarPoint p = random_polar(3.0), q = random_polar(3.0);
        const double cd = std::cosh(p.rho) * std::cosh(q.rho) -
                          std::sinh(p.rho) * std::sinh(q.rho) * std::cos(p.theta - q.theta);
        const double want = std::acosh(std::max(1.0, cd));
        const double got = hyperbolic_distance(polar_to_halfplane(p), polar_to_halfplane(q));
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("boundary point rejection") {
    CHECK_THROWS_AS(halfplane_to_polar({0.5, 0.0}), PreconditionError);
    CHECK_THROWS_AS(disk_area(-1.0), PreconditionError);
}

TEST_CASE("dilation acts as (x,y) -> (tx,ty) on the 0-pi axis") {
    Isometry psi = Isometry::hyperbolic_dilation(2.0, 0.0, kPi);
    ProductPoint p{1.0, 1.0, 0.7};
    ProductPoint q = psi.apply(p);
    CHECK(q.x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(q.y == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(q.z == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("vertical translation moves only z") {
    Isometry tz = Isometry::vertical_translation(3.0);
    ProductPoint q = tz.apply({0.4, 2.0, 0.0});
    CHECK(q.x == doctest::Approx(0.4));
    CHECK(q.y == doctest::Approx(2.0));
    CHECK(q.z == doctest::Approx(3.0));
}

TEST_CASE("isometries preserve the product distance") {
    for (int i = 0; i < 150; ++i) {
        Isometry iso = random_isometry();
        ProductPoint p = random_product(), q = random_product();
        const double before = product_distance(p, q);
        const double after = product_distance(iso.apply(p), iso.apply(q));
        CHECK(after == doctest::Approx(before).epsilon(1e-10));
    }
}

TEST_CASE("compose with inverse is the identity") {
    for (int i = 0; i < 100; ++i) {
        Isometry iso = random_isometry();
        Isometry id = iso.compose(iso.inverse());
        ProductPoint p = random_product();
        CHECK(product_distance(id.apply(p), p) < 1e-12);
    }
}

TEST_CASE("boundary action of a dilation fixes its axis and is monotone") {
    const double a = 1.0, b = 4.0;
    Isometry psi = Isometry::hyperbolic_dilation(3.0, a, b);
    CHECK(psi.boundary_angle_action(a) == doctest::Approx(a).epsilon(1e-12));
    CHECK(psi.boundary_angle_action(b) == doctest::Approx(b).epsilon(1e-12));
    // monotone on the arc from a to b (angles strictly between move toward b)
    double prev = -1.0;
    for (int k = 1; k < 40; ++k) {
        const double th = a + (b - a) * k / 40.0;
        const double img = psi.boundary_angle_action(th);
        CHECK(img > th);  // pushed toward the sink
        CHECK(img < b);
        CHECK(img > prev);
        prev = img;
    }
}

TEST_CASE("theta_t ordering of the rectangle foliation dilation") {
    // dilation along the 0-pi axis: theta_t > theta_1 for t > 1, < for t < 1
    const double theta1 = 1.2;
    Isometry up = Isometry::hyperbolic_dilation(1.7, 0.0, kPi);
    Isometry down = Isometry::hyperbolic_dilation(0.6, 0.0, kPi);
    CHECK(up.boundary_angle_action(theta1) > theta1);
    CHECK(down.boundary_angle_action(theta1) < theta1);
}

TEST_CASE("disk area formula") {
    CHECK(disk_area(0.0) == doctest::Approx(0.0));
    CHECK(disk_area(1.0) == doctest::Approx(kTwoPi * (std::cosh(1.0) - 1.0)));

    // Monte-Carlo oracle: area = int_0^rho 2 pi sinh(r) dr sampled uniformly in r
    const double rho = 2.0;
    std::mt19937 mc(7u);
    std::uniform_real_distribution<double> ur(0.0, rho);
    double acc = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) acc += std::sinh(ur(mc));
    const double estimate = kTwoPi * rho * acc / n;
    CHECK(std::abs(estimate - disk_area(rho)) / disk_area(rho) < 0.01);
}

TEST_CASE("distance to geodesic") {
    // geodesic between angles 0 and pi is the half-plane y-axis
    Geodesic axis{0.0, kPi};
    CHECK(distance_to_geodesic({1.0, 1.0}, axis) == doctest::Approx(std::asinh(1.0)).epsilon(1e-12));
    CHECK(distance_to_geodesic({0.0, 2.7}, axis) == doctest::Approx(0.0));

    // generic geodesic: distance is invariant under a dilation fixing it
    Geodesic g{0.8, 3.9};
    Isometry psi = Isometry::hyperbolic_dilation(2.3, g.angle_a, g.angle_b);
    for (int i = 0; i < 50; ++i) {
        HalfPlanePoint p = polar_to_halfplane(random_polar(3.0));
        const double d0 = distance_to_geodesic(p, g);
        const double d1 = distance_to_geodesic(psi.apply(p), g);
        CHECK(d1 == doctest::Approx(d0).epsilon(1e-9));
    }
}
