#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hxr/curves.hpp"
#include "hxr/errors.hpp"

using namespace hxr;
using namespace hxr::testfix;

TEST_CASE("curve validation") {
    // too few vertices
    CHECK_THROWS_AS(RectilinearCurve({{0, 0}, {1, 0}, {1, 1}}), ValidationError);
    // diagonal edge
    CHECK_THROWS_AS(RectilinearCurve({{0, 0}, {1, 1}, {1, 2}, {0, 2}}), ValidationError);
    // self-intersection (figure eight)
    CHECK_THROWS_AS(RectilinearCurve({{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {1.0, 2.0},
                                      {1.0, -1.0}, {3.0, -1.0}, {3.0, 3.0}, {0.0, 3.0}}),
                    ValidationError);
    // not closing in t
    CHECK_THROWS_AS(RectilinearCurve({{0, 0}, {1, 0}, {1, 1}, {0, 2}}), ValidationError);
    // overlapping components
    CHECK_THROWS_AS(BoundaryCurveFamily({rect_family(0, 2, 0, 4).components()[0],
                                         rect_family(1, 3, 2, 6).components()[0]}),
                    ValidationError);
    // fine: essential staircase
    CHECK(essential_staircase(0.0, 0.1).winding() == 1);
    CHECK(rect_family(0, 1, 0, 4).components()[0].winding() == 0);
}

TEST_CASE("height of the exceptional fixture is exactly 2") {
    BoundaryCurveFamily gamma = exceptional_curve();
    CHECK(height(gamma) == 2.0);
    TallnessVerdict v = classify(gamma, 1e-9);
    CHECK(v.cls == TallnessClass::Exceptional);
    CHECK(v.height == 2.0);
    CHECK(v.essential_height == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("height of a plain tall rectangle comes from its interior slab") {
    CHECK(height(rect_family(0.0, 1.0, 0.0, kTwoPi)) == doctest::Approx(kTwoPi).epsilon(1e-14));
    CHECK(height(BoundaryCurveFamily{}) == std::numeric_limits<double>::infinity());
}

TEST_CASE("classification basics") {
    TallnessVerdict tall = classify(rect_family(0, 1, 0, 4));
    CHECK(tall.cls == TallnessClass::Tall);
    CHECK(tall.height == doctest::Approx(4.0));
    CHECK(!tall.cover_plus.empty());
    CHECK(!tall.cover_minus.empty());
    for (const CylRect& r : tall.cover_plus) CHECK(r.is_tall());
    for (const CylRect& r : tall.cover_minus) CHECK(r.is_tall());

    TallnessVerdict sh = classify(rect_family(0, 1, 0, 3));
    CHECK(sh.cls == TallnessClass::Short);
    REQUIRE(sh.short_witness.has_value());
    CHECK(sh.short_witness->t_hi - sh.short_witness->t_lo == doctest::Approx(3.0));

    TallnessVerdict bl = classify(rect_family(0, 1, 0, kPi + 1e-12));
    CHECK(bl.cls == TallnessClass::Borderline);
}

TEST_CASE("seam-crossing rectangle") {
    // rectangle straddling theta = 0, written with a lifted arc 5.8 -> 7.0
    BoundaryCurveFamily f = rect_family(5.8, 5.8 + 1.2, 0.0, 4.0);
    CHECK(height(f) == doctest::Approx(4.0));
    CHECK(classify(f).cls == TallnessClass::Tall);
}

TEST_CASE("tallness equivalence and oracle agreement on random families") {
    std::mt19937 rng(1234u);
    for (int trial = 0; trial < 120; ++trial) {
        BoundaryCurveFamily f = random_family(rng);
        const double h = height(f);
        TallnessVerdict v = classify(f, 1e-9);
        if (v.cls == TallnessClass::Tall) CHECK(h > kPi);
        if (v.cls == TallnessClass::Short) CHECK(h < kPi);
        CHECK((v.cls == TallnessClass::Tall) == (h > kPi && std::abs(h - kPi) > 1e-9));

        const double hg = grid_height_oracle(f, 20000);
        CHECK(hg >= h - 1e-12);
        const double t_range = f.t_max() - f.t_min();
        CHECK(hg - h <= t_range / 20000.0 + 1e-12);
    }
}

TEST_CASE("height invariance under rotation and vertical translation") {
    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi), ut(-5.0, 5.0);
    for (int trial = 0; trial < 40; ++trial) {
        BoundaryCurveFamily f = random_family(rng);
        const double h = height(f);
        BoundaryCurveFamily g = rotate_translate(f, ua(rng), ut(rng));
        CHECK(height(g) == doctest::Approx(h).epsilon(1e-12));
    }
}

TEST_CASE("thin tails: tall rectangle has none") {
    CHECK(detect_thin_tails(rect_family(0, 1, 0, 4)).empty());
}

TEST_CASE("thin tails: finger fixture has exactly one, verified independently") {
    BoundaryCurveFamily f = finger_curve();
    auto tails = detect_thin_tails(f);
    REQUIRE(tails.size() == 1);
    const ThinTail& tail = tails[0];
    CHECK(tail.barrier_meridian == doctest::Approx(1.2));
    CHECK(tail.side == MeridianSide::Right);

    // re-check the three conditions directly on the arc
    const RectilinearCurve& c = f.components()[tail.component];
    bool meets = false;
    double lo = 1e30, hi = -1e30;
    for (int k = 0; k < tail.vertex_count; ++k) {
        const BoundaryPoint& p = c.vertices()[(tail.first_vertex + k) % c.size()];
        if (std::abs(p.theta - tail.barrier_meridian) < 1e-12) meets = true;
        lo = std::min(lo, p.t);
        hi = std::max(hi, p.t);
    }
    CHECK(meets);
    const BoundaryPoint& e0 = c.vertices()[tail.first_vertex];
    const BoundaryPoint& e1 = c.vertices()[(tail.first_vertex + tail.vertex_count - 1) % c.size()];
    CHECK(std::abs(e0.theta - tail.barrier_meridian) > 1e-12);
    CHECK(std::abs(e1.theta - tail.barrier_meridian) > 1e-12);
    CHECK(lo > tail.strip_lo);
    CHECK(hi < tail.strip_lo + kPi);

    // a curve containing a thin tail is short
    CHECK(height(f) < kPi);
}

TEST_CASE("thin tails: shortness from an inter-component gap is not a tail") {
    BoundaryCurveFamily f = close_pair_curve();
    CHECK(height(f) < kPi); // the gap between the components is 0.1
    CHECK(detect_thin_tails(f).empty());
}

TEST_CASE("decompose: single rectangle") {
    BoundaryCurveFamily f = rect_family(0, 1, 0, 4);
    // the side containing the rectangle interior is the odd-parity one
    auto minus = decompose_tall_region(f, RegionSide::Minus);
    REQUIRE(minus.size() == 1);
    CHECK(minus[0].theta_lo == doctest::Approx(0.0));
    CHECK(minus[0].theta_hi == doctest::Approx(1.0));
    CHECK(minus[0].t_lo == doctest::Approx(0.0));
    CHECK(minus[0].t_hi == doctest::Approx(4.0));
    auto plus = decompose_tall_region(f, RegionSide::Plus);
    for (const CylRect& r : plus) CHECK(r.is_tall());

    CHECK_THROWS_AS(decompose_tall_region(rect_family(0, 1, 0, 3), RegionSide::Plus), PreconditionError);
}

namespace {

// sampling oracle: which side of the complement a point belongs to,
// derived from scratch by counting crossings above it
RegionSide side_of_point(const BoundaryCurveFamily& f, double theta, double t) {
    int above = 0;
    for (const auto& comp : f.components()) {
        for (const auto& e : comp.edges()) {
            if (!e.horizontal || e.t0 <= t) continue;
            double off = std::fmod(theta - e.theta0, kTwoPi);
            if (off < 0) off += kTwoPi;
            const bool inside = (e.dtheta > 0) ? off <= e.dtheta : (kTwoPi - off) <= -e.dtheta;
            if (inside) ++above;
        }
    }
    return above % 2 == 0 ? RegionSide::Plus : RegionSide::Minus;
}

void check_cells_cover_side(const BoundaryCurveFamily& f, RegionSide side) {
    auto cells = decompose_tall_region(f, side);
    for (const CylRect& r : cells) CHECK(r.is_tall());
    // interiors pairwise disjoint
    for (size_t i = 0; i < cells.size(); ++i) {
        for (size_t j = i + 1; j < cells.size(); ++j) {
            const double mi = wrap_angle(cells[i].theta_lo + 0.5 * cells[i].theta_span());
            const bool theta_overlap = cells[j].contains_theta(mi) || cells[i].contains_theta(wrap_angle(cells[j].theta_lo + 0.5 * cells[j].theta_span()));
            const bool t_overlap = cells[i].t_lo < cells[j].t_hi - 1e-12 && cells[j].t_lo < cells[i].t_hi - 1e-12;
            if (theta_overlap && t_overlap) {
                // only boundary contact is allowed; midpoints must not be interior to the other
                const double tm = 0.5 * (std::max(cells[i].t_lo, -100.0) + std::min(cells[i].t_hi, 100.0));
                CHECK(!(cells[j].contains_theta(mi) && tm > cells[j].t_lo + 1e-9 && tm < cells[j].t_hi - 1e-9 &&
                        mi != cells[j].theta_lo && mi != wrap_angle(cells[j].theta_lo + cells[j].theta_span())));
            }
        }
    }
    // dense sampling: cells cover exactly the points of the chosen side
    std::mt19937 rng(99u);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi), ut(-12.0, 12.0);
    for (int k = 0; k < 4000; ++k) {
        const double theta = ua(rng), t = ut(rng);
        // skip points too close to any curve edge or event meridian
        bool near = false;
        for (const auto& comp : f.components()) {
            for (const auto& e : comp.edges()) {
                if (e.horizontal && std::abs(e.t0 - t) < 1e-3) near = true;
                if (!e.horizontal) {
                    double d = std::abs(wrap_angle(theta - e.theta0));
                    d = std::min(d, kTwoPi - d);
                    if (d < 1e-3) near = true;
                }
            }
        }
        if (near) continue;
        bool in_cells = false;
        for (const CylRect& r : cells)
            if (r.contains(theta, t)) in_cells = true;
        CHECK(in_cells == (side_of_point(f, theta, t) == side));
    }
}

} // namespace

TEST_CASE("decompose: L-shape gives two tall slab cells") {
    BoundaryCurveFamily f = l_shape_curve();
    auto cells = decompose_tall_region(f, RegionSide::Minus);
    REQUIRE(cells.size() == 2);
    for (const CylRect& r : cells) CHECK(r.height() > kPi);
    check_cells_cover_side(f, RegionSide::Minus);
    check_cells_cover_side(f, RegionSide::Plus);
}

TEST_CASE("decompose: nested rectangles partition at the inner meridians") {
    BoundaryCurveFamily f = nested_rects_curve();
    CHECK(classify(f).cls == TallnessClass::Tall);
    auto cells = decompose_tall_region(f, RegionSide::Minus);
    // annulus side: 1 cell left of the inner rect, 2 cells against it, 1 right,
    // plus the inner disk's own parity... verified by sampling below
    check_cells_cover_side(f, RegionSide::Minus);
    check_cells_cover_side(f, RegionSide::Plus);
    for (const CylRect& r : cells) {
        CHECK((r.theta_lo == doctest::Approx(1.0) || r.theta_lo == doctest::Approx(2.0) ||
               r.theta_lo == doctest::Approx(4.0)));
    }
}

TEST_CASE("slot surgery: same-component cut splits, cross-component cut merges") {
    // same component: rectangle -> two rectangles
    BoundaryCurveFamily one = rect_family(0.0, 1.6, 0.0, 4.0);
    BoundaryCurveFamily split = cut_vertical_slot(one, 0.8, 0.0, 4.0, 0.1);
    CHECK(split.components().size() == 2);
    CHECK(classify(split).cls == TallnessClass::Tall);

    // different components: stacked rectangles joined across the gap
    std::vector<RectilinearCurve> comps;
    comps.push_back(rect_family(0.0, 1.6, 2.2, 6.0).components()[0]);
    comps.push_back(rect_family(0.0, 1.6, -6.0, -2.2).components()[0]);
    BoundaryCurveFamily two(std::move(comps));
    BoundaryCurveFamily merged = cut_vertical_slot(two, 0.8, -2.2, 2.2, 0.1);
    CHECK(merged.components().size() == 1);

    // blocked slot interior
    CHECK_THROWS_AS(cut_vertical_slot(nested_rects_curve(), 3.0, -8.0, 8.0, 0.1), PreconditionError);
}

TEST_CASE("JSON round trip") {
    BoundaryCurveFamily f = exceptional_curve();
    const std::string text = family_to_json(f);
    BoundaryCurveFamily g = family_from_json(text);
    CHECK(g.components().size() == f.components().size());
    CHECK(height(g) == height(f));
    CHECK_THROWS_AS(family_from_json("{"), ValidationError);
    CHECK_THROWS_AS(family_from_json("{\"components\": [[{\"theta\": 0}]]}"), ValidationError);

    // seam-crossing family survives the round trip
    BoundaryCurveFamily w = rect_family(5.8, 7.0, 0.0, 4.0);
    CHECK(height(family_from_json(family_to_json(w))) == doctest::Approx(4.0));
}
