#pragma once

// Shared test fixtures: canonical curves from the problem domain and a
// randomized rectilinear family generator.

#include <random>
#include <vector>

#include "hxr/curves.hpp"

namespace hxr::testfix {

inline BoundaryCurveFamily rect_family(double th_lo, double th_hi, double t_lo, double t_hi) {
    return rectangle_family(CylRect{th_lo, th_hi, t_lo, t_hi});
}

// Two 6-tall rectangles R1 = [0,pi/3] x [-1,5], R2 = [pi/3,2pi/3] x [-5,1]
// joined by removing the open segment {pi/3} x (-1,1): height 2, attained
// only on the shared meridian.
inline BoundaryCurveFamily exceptional_curve() {
    std::vector<BoundaryPoint> v = {
        {kPi / 3, 1.0},  {kPi / 3, 5.0},  {0.0, 5.0},          {0.0, -1.0},
        {kPi / 3, -1.0}, {kPi / 3, -5.0}, {2 * kPi / 3, -5.0}, {2 * kPi / 3, 1.0},
    };
    return BoundaryCurveFamily({RectilinearCurve(std::move(v))});
}

// Rectangle [2,3] x [0,4] with a height-0.5 horizontal finger poking left
// to theta = 1.2 at heights [2, 2.5].
inline BoundaryCurveFamily finger_curve() {
    std::vector<BoundaryPoint> v = {
        {2.0, 0.0}, {3.0, 0.0}, {3.0, 4.0}, {2.0, 4.0},
        {2.0, 2.5}, {1.2, 2.5}, {1.2, 2.0}, {2.0, 2.0},
    };
    return BoundaryCurveFamily({RectilinearCurve(std::move(v))});
}

// Two tall rectangles stacked with a short vertical gap between them, so
// the family is short although both components are tall.
inline BoundaryCurveFamily close_pair_curve() {
    std::vector<RectilinearCurve> comps;
    comps.push_back(rect_family(0.0, 2.0, 0.5, 4.5).components()[0]);
    comps.push_back(rect_family(0.0, 2.0, -4.5, -0.5).components()[0]);
    return BoundaryCurveFamily(std::move(comps));
}

// L-shaped tall region [0,2]x[0,4] union [2,4]x[0,8] (one reflex corner).
inline BoundaryCurveFamily l_shape_curve() {
    std::vector<BoundaryPoint> v = {
        {0.0, 0.0}, {4.0, 0.0}, {4.0, 8.0}, {2.0, 8.0}, {2.0, 4.0}, {0.0, 4.0},
    };
    return BoundaryCurveFamily({RectilinearCurve(std::move(v))});
}

// Nested tall rectangles bounding a tall annular region.
inline BoundaryCurveFamily nested_rects_curve() {
    std::vector<RectilinearCurve> comps;
    comps.push_back(rect_family(1.0, 5.0, -8.0, 8.0).components()[0]);
    comps.push_back(rect_family(2.0, 4.0, -2.0, 2.0).components()[0]);
    return BoundaryCurveFamily(std::move(comps));
}

// Essential staircase curve winding once around the cylinder: a horizontal
// circle at height t_base with a small jog of height `jog` at theta_jog.
inline RectilinearCurve essential_staircase(double t_base, double jog, double theta_jog = kPi) {
    std::vector<BoundaryPoint> v = {
        {0.0, t_base}, {theta_jog, t_base}, {theta_jog, t_base + jog}, {kTwoPi, t_base + jog},
    };
    return RectilinearCurve(std::move(v));
}

// Staircase region between piecewise-constant bottom and top graphs over
// [a, b]: always a simple nullhomotopic rectilinear curve. Top and bottom
// jogs use interleaved meridians so no event meridian carries facing
// vertical edges (which would put the height infimum on the event itself).
inline RectilinearCurve staircase_region(std::mt19937& rng, double a, double b, double t_center, double t_scale) {
    std::uniform_int_distribution<int> mdist(1, 3);
    const int mt = mdist(rng), mb = mdist(rng);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    auto make_cuts = [&](int m, double phase) {
        std::vector<double> cuts(m + 1);
        cuts[0] = a;
        cuts[m] = b;
        for (int i = 1; i < m; ++i)
            cuts[i] = a + (b - a) * (i + phase + 0.3 * (u01(rng) - 0.5)) / (m + 1);
        std::sort(cuts.begin(), cuts.end());
        return cuts;
    };
    const std::vector<double> tcuts = make_cuts(mt, 0.13);
    const std::vector<double> bcuts = make_cuts(mb, 0.57);

    std::vector<double> top(mt), bot(mb);
    for (int i = 0; i < mt; ++i) {
        do {
            top[i] = t_center + t_scale * (0.3 + 0.7 * u01(rng));
        } while (i > 0 && std::abs(top[i] - top[i - 1]) < 1e-3);
    }
    for (int i = 0; i < mb; ++i) {
        do {
            bot[i] = t_center - t_scale * (0.3 + 0.7 * u01(rng));
        } while (i > 0 && std::abs(bot[i] - bot[i - 1]) < 1e-3);
    }

    std::vector<BoundaryPoint> v;
    v.push_back({a, bot[0]});
    v.push_back({a, top[0]});
    for (int i = 1; i < mt; ++i) {
        v.push_back({tcuts[i], top[i - 1]});
        v.push_back({tcuts[i], top[i]});
    }
    v.push_back({b, top[mt - 1]});
    v.push_back({b, bot[mb - 1]});
    for (int i = mb - 1; i >= 1; --i) {
        v.push_back({bcuts[i], bot[i]});
        v.push_back({bcuts[i], bot[i - 1]});
    }
    return RectilinearCurve(std::move(v));
}

// Random family of 1-3 disjoint components in disjoint angular bands;
// occasionally two components stacked in one band.
inline BoundaryCurveFamily random_family(std::mt19937& rng) {
    std::uniform_int_distribution<int> ncomp(1, 3);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int n = ncomp(rng);
    std::vector<RectilinearCurve> comps;
    const double band = kTwoPi / n;
    for (int i = 0; i < n; ++i) {
        const double a = i * band + 0.15 * band;
        const double b = (i + 1) * band - 0.15 * band;
        if (n < 3 && u01(rng) < 0.3) {
            // stacked pair sharing the band
            const double gap = 0.5 + 3.0 * u01(rng);
            const double scale = 1.0 + 2.0 * u01(rng);
            comps.push_back(staircase_region(rng, a, b, 2.0 * scale + 0.5 * gap, scale));
            comps.push_back(staircase_region(rng, a, b, -2.0 * scale - 0.5 * gap, scale));
        } else {
            comps.push_back(staircase_region(rng, a, b, 8.0 * (u01(rng) - 0.5), 1.0 + 3.0 * u01(rng)));
        }
    }
    return BoundaryCurveFamily(std::move(comps));
}

// Independent brute-force oracle: sample N meridians, intersect intervals
// directly.
inline double grid_height_oracle(const BoundaryCurveFamily& f, int N) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> ts;
    for (int i = 0; i < N; ++i) {
        const double theta = (i + 0.5) * kTwoPi / N;
        ts.clear();
        for (const auto& comp : f.components()) {
            for (const auto& e : comp.edges()) {
                if (!e.horizontal) continue;
                double off = std::fmod(theta - e.theta0, kTwoPi);
                if (off < 0) off += kTwoPi;
                const bool inside = (e.dtheta > 0) ? off <= e.dtheta
                                                   : (kTwoPi - off) <= -e.dtheta;
                if (inside) ts.push_back(e.t0);
            }
        }
        std::sort(ts.begin(), ts.end());
        for (size_t k = 0; k + 1 < ts.size(); ++k) best = std::min(best, ts[k + 1] - ts[k]);
    }
    return best;
}

} // namespace hxr::testfix
