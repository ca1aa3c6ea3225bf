#include "hxr/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hxr/errors.hpp"

namespace hxr {

namespace {

constexpr double kAngleEps = 1e-12;
constexpr double kTEps = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_angle(double a, double b) {
    const double d = wrap_angle(a - b);
    return d < kAngleEps || kTwoPi - d < kAngleEps;
}

// signed position of theta inside the arc starting at theta0 with signed
// extent dtheta; negative if outside
double arc_offset(double theta0, double dtheta, double theta) {
    const double span = std::abs(dtheta);
    double off = (dtheta >= 0.0) ? wrap_angle(theta - theta0) : wrap_angle(theta0 - theta);
    if (off <= span + kAngleEps) return std::min(off, span);
    if (kTwoPi - off < kAngleEps) return 0.0;
    return -1.0;
}

} // namespace

double CylRect::theta_span() const {
    if (theta_lo == 0.0 && theta_hi == kTwoPi) return kTwoPi;
    double s = theta_hi - theta_lo;
    if (s <= 0.0) s += kTwoPi;
    return s;
}

bool CylRect::contains_theta(double theta) const {
    if (theta_span() >= kTwoPi) return true;
    const double off = wrap_angle(theta - theta_lo);
    return off <= theta_span() + kAngleEps || kTwoPi - off < kAngleEps;
}

bool CylRect::contains(double theta, double t) const {
    return contains_theta(theta) && t >= t_lo - kTEps && t <= t_hi + kTEps;
}

bool CurveEdge::contains_angle(double theta) const {
    if (!horizontal) return same_angle(theta0, theta);
    return arc_offset(theta0, dtheta, theta) >= 0.0;
}

RectilinearCurve::RectilinearCurve(std::vector<BoundaryPoint> raw) {
    const int n = static_cast<int>(raw.size());
    if (n < 4) throw ValidationError("curve needs at least 4 vertices");
    if (n % 2 != 0) throw ValidationError("curve needs an even vertex count");

    double sum_dtheta = 0.0, sum_dt = 0.0;
    t_min_ = kInf;
    t_max_ = -kInf;
    edges_.reserve(n);
    for (int i = 0; i < n; ++i) {
        const BoundaryPoint& a = raw[i];
        const BoundaryPoint& b = raw[(i + 1) % n];
        const double dtheta_raw = b.theta - a.theta;
        const double dt = b.t - a.t;
        // a vertical edge leaves theta unchanged on the cylinder; the lift
        // may still jump by a full turn on the closing edge of an essential
        // curve
        const double dtheta_mod = dtheta_raw - kTwoPi * std::round(dtheta_raw / kTwoPi);
        const bool vertical = std::abs(dtheta_mod) < kAngleEps && dt != 0.0;
        const bool horizontal = std::abs(dtheta_mod) >= kAngleEps && dt == 0.0;
        if (vertical == horizontal)
            throw ValidationError("edge must change exactly one coordinate");
        if (horizontal && std::abs(dtheta_raw) >= kTwoPi)
            throw ValidationError("horizontal edge covers the whole circle");
        CurveEdge e;
        e.index = i;
        e.horizontal = horizontal;
        e.theta0 = wrap_angle(a.theta);
        e.dtheta = horizontal ? dtheta_raw : 0.0;
        e.t0 = a.t;
        e.t1 = b.t;
        edges_.push_back(e);
        // vertical edges never move theta; a raw +/-2*pi jump on the closing
        // edge of an essential curve is lift bookkeeping only
        sum_dtheta += horizontal ? dtheta_raw : 0.0;
        sum_dt += dt;
        t_min_ = std::min(t_min_, a.t);
        t_max_ = std::max(t_max_, a.t);
    }
    for (int i = 0; i < n; ++i) {
        if (edges_[i].horizontal == edges_[(i + 1) % n].horizontal)
            throw ValidationError("edges must alternate direction");
    }
    if (std::abs(sum_dt) > 1e-9) throw ValidationError("curve does not close in t");
    const double w = sum_dtheta / kTwoPi;
    winding_ = static_cast<int>(std::lround(w));
    if (std::abs(w - winding_) > 1e-9 || std::abs(winding_) > 1)
        throw ValidationError("curve does not close on the cylinder");

    vertices_.reserve(n);
    for (const BoundaryPoint& p : raw) vertices_.push_back({wrap_angle(p.theta), p.t});

    // simplicity: no two non-adjacent edges may touch; adjacent edges may
    // share only their common vertex
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            const CurveEdge& e = edges_[i];
            const CurveEdge& f = edges_[j];
            if (e.horizontal && f.horizontal) {
                if (std::abs(e.t0 - f.t0) > kTEps) continue;
                // overlap of two closed arcs
                const double off0 = arc_offset(e.theta0, e.dtheta, f.theta0);
                const double off1 = arc_offset(e.theta0, e.dtheta, wrap_angle(f.theta0 + f.dtheta));
                const double rev0 = arc_offset(f.theta0, f.dtheta, e.theta0);
                if (off0 >= 0.0 || off1 >= 0.0 || rev0 >= 0.0)
                    throw ValidationError("horizontal edges overlap");
            } else if (!e.horizontal && !f.horizontal) {
                if (!same_angle(e.theta0, f.theta0)) continue;
                const double alo = std::min(e.t0, e.t1), ahi = std::max(e.t0, e.t1);
                const double blo = std::min(f.t0, f.t1), bhi = std::max(f.t0, f.t1);
                if (ahi >= blo - kTEps && bhi >= alo - kTEps)
                    throw ValidationError("vertical edges overlap");
            } else {
                const CurveEdge& h = e.horizontal ? e : f;
                const CurveEdge& v = e.horizontal ? f : e;
                const double off = arc_offset(h.theta0, h.dtheta, v.theta0);
                if (off < 0.0) continue;
                const double vlo = std::min(v.t0, v.t1), vhi = std::max(v.t0, v.t1);
                if (h.t0 < vlo - kTEps || h.t0 > vhi + kTEps) continue;
                if (!adjacent) throw ValidationError("curve crosses itself");
                // contact must be exactly the shared vertex: the meridian at
                // an arc endpoint and the height at a segment endpoint
                const double span = std::abs(h.dtheta);
                const bool at_arc_end = off < kAngleEps || off > span - kAngleEps;
                const bool at_seg_end = std::abs(h.t0 - vlo) < kTEps || std::abs(h.t0 - vhi) < kTEps;
                if (!at_arc_end || !at_seg_end)
                    throw ValidationError("adjacent edges form a T-junction");
            }
        }
    }
}

namespace {

bool edges_touch(const CurveEdge& e, const CurveEdge& f) {
    if (e.horizontal && f.horizontal) {
        if (std::abs(e.t0 - f.t0) > kTEps) return false;
        return arc_offset(e.theta0, e.dtheta, f.theta0) >= 0.0 ||
               arc_offset(e.theta0, e.dtheta, wrap_angle(f.theta0 + f.dtheta)) >= 0.0 ||
               arc_offset(f.theta0, f.dtheta, e.theta0) >= 0.0;
    }
    if (!e.horizontal && !f.horizontal) {
        if (!same_angle(e.theta0, f.theta0)) return false;
        const double alo = std::min(e.t0, e.t1), ahi = std::max(e.t0, e.t1);
        const double blo = std::min(f.t0, f.t1), bhi = std::max(f.t0, f.t1);
        return ahi >= blo - kTEps && bhi >= alo - kTEps;
    }
    const CurveEdge& h = e.horizontal ? e : f;
    const CurveEdge& v = e.horizontal ? f : e;
    if (arc_offset(h.theta0, h.dtheta, v.theta0) < 0.0) return false;
    const double vlo = std::min(v.t0, v.t1), vhi = std::max(v.t0, v.t1);
    return h.t0 >= vlo - kTEps && h.t0 <= vhi + kTEps;
}

} // namespace

BoundaryCurveFamily::BoundaryCurveFamily(std::vector<RectilinearCurve> components)
    : components_(std::move(components)) {
    for (size_t a = 0; a < components_.size(); ++a) {
        for (size_t b = a + 1; b < components_.size(); ++b) {
            for (const CurveEdge& e : components_[a].edges()) {
                for (const CurveEdge& f : components_[b].edges()) {
                    if (edges_touch(e, f)) throw ValidationError("family components are not disjoint");
                }
            }
        }
    }
}

double BoundaryCurveFamily::t_min() const {
    double m = kInf;
    for (const auto& c : components_) m = std::min(m, c.t_min());
    return m;
}

double BoundaryCurveFamily::t_max() const {
    double m = -kInf;
    for (const auto& c : components_) m = std::max(m, c.t_max());
    return m;
}

const char* to_string(TallnessClass c) {
    switch (c) {
        case TallnessClass::Tall: return "Tall";
        case TallnessClass::Short: return "Short";
        case TallnessClass::Borderline: return "Borderline";
        case TallnessClass::Exceptional: return "Exceptional";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// meridian sweep

namespace {

struct Crossing {
    double t;
    int comp;
};

struct CoveredPiece {
    double lo, hi;
    int comp;
};

struct SlabInfo {
    double lo = 0.0, hi = 0.0;     // hi may exceed 2*pi for the wrap slab
    std::vector<Crossing> crossings; // sorted by t
};

struct EventInfo {
    double theta = 0.0;
    std::vector<CoveredPiece> covered; // merged, sorted by lo
};

struct Gap {
    double len = kInf;
    double theta = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int comp = -1;
};

struct Sweep {
    std::vector<EventInfo> events;
    std::vector<SlabInfo> slabs;
};

Sweep build_sweep(const BoundaryCurveFamily& family) {
    Sweep sw;
    std::vector<double> evs;
    for (const auto& comp : family.components())
        for (const CurveEdge& e : comp.edges())
            if (!e.horizontal) evs.push_back(e.theta0);
    std::sort(evs.begin(), evs.end());
    std::vector<double> uniq;
    for (double v : evs) {
        if (uniq.empty() || v - uniq.back() > kAngleEps) uniq.push_back(v);
    }
    // the first and last may coincide across the seam
    if (uniq.size() > 1 && kTwoPi - (uniq.back() - uniq.front()) < kAngleEps) uniq.pop_back();

    const auto& comps = family.components();
    for (double theta_e : uniq) {
        EventInfo ev;
        ev.theta = theta_e;
        std::vector<CoveredPiece> pieces;
        for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci) {
            for (const CurveEdge& e : comps[ci].edges()) {
                if (e.horizontal) {
                    if (e.contains_angle(theta_e)) pieces.push_back({e.t0, e.t0, ci});
                } else if (same_angle(e.theta0, theta_e)) {
                    pieces.push_back({std::min(e.t0, e.t1), std::max(e.t0, e.t1), ci});
                }
            }
        }
        std::sort(pieces.begin(), pieces.end(), [](const CoveredPiece& a, const CoveredPiece& b) { return a.lo < b.lo; });
        for (const CoveredPiece& p : pieces) {
            if (!ev.covered.empty() && p.lo <= ev.covered.back().hi + kTEps)
                ev.covered.back().hi = std::max(ev.covered.back().hi, p.hi);
            else
                ev.covered.push_back(p);
        }
        sw.events.push_back(std::move(ev));
    }

    const size_t m = uniq.size();
    auto make_slab = [&](double lo, double hi) {
        SlabInfo s;
        s.lo = lo;
        s.hi = hi;
        const double mid = wrap_angle(lo + 0.5 * (hi - lo));
        for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci)
            for (const CurveEdge& e : comps[ci].edges())
                if (e.horizontal && e.contains_angle(mid)) s.crossings.push_back({e.t0, ci});
        std::sort(s.crossings.begin(), s.crossings.end(), [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
        sw.slabs.push_back(std::move(s));
    };
    if (m == 0) {
        make_slab(0.0, kTwoPi);
    } else if (m == 1) {
        make_slab(uniq[0], uniq[0] + kTwoPi);
    } else {
        for (size_t i = 0; i + 1 < m; ++i) make_slab(uniq[i], uniq[i + 1]);
        make_slab(uniq[m - 1], uniq[0] + kTwoPi);
    }
    return sw;
}

Gap min_gap_event(const EventInfo& ev) {
    Gap g;
    g.theta = ev.theta;
    for (size_t i = 0; i + 1 < ev.covered.size(); ++i) {
        const double len = ev.covered[i + 1].lo - ev.covered[i].hi;
        if (len < g.len) {
            g.len = len;
            g.t_lo = ev.covered[i].hi;
            g.t_hi = ev.covered[i + 1].lo;
            g.comp = ev.covered[i].comp;
        }
    }
    return g;
}

Gap min_gap_slab(const SlabInfo& s) {
    Gap g;
    g.theta = wrap_angle(s.lo + 0.5 * (s.hi - s.lo));
    for (size_t i = 0; i + 1 < s.crossings.size(); ++i) {
        const double len = s.crossings[i + 1].t - s.crossings[i].t;
        if (len < g.len) {
            g.len = len;
            g.t_lo = s.crossings[i].t;
            g.t_hi = s.crossings[i + 1].t;
            g.comp = s.crossings[i].comp;
        }
    }
    return g;
}

struct Heights {
    Gap pointwise;
    Gap essential;
};

Heights sweep_heights(const Sweep& sw) {
    Heights h;
    for (const SlabInfo& s : sw.slabs) {
        const Gap g = min_gap_slab(s);
        if (g.len < h.essential.len) h.essential = g;
    }
    h.pointwise = h.essential;
    for (const EventInfo& ev : sw.events) {
        const Gap g = min_gap_event(ev);
        if (g.len < h.pointwise.len) h.pointwise = g;
    }
    return h;
}

std::vector<CylRect> cells_of_side(const Sweep& sw, RegionSide side) {
    std::vector<CylRect> cells;
    for (const SlabInfo& s : sw.slabs) {
        const double lo = s.lo;
        const double hi = (s.hi >= kTwoPi && s.lo == 0.0) ? kTwoPi : wrap_angle(s.hi);
        const int k = static_cast<int>(s.crossings.size());
        auto parity_matches = [&](int parity) {
            return (parity % 2 == 0) == (side == RegionSide::Plus);
        };
        if (k == 0) {
            if (parity_matches(0)) cells.push_back({lo, hi, -kInf, kInf});
            continue;
        }
        if (parity_matches(0)) cells.push_back({lo, hi, s.crossings[k - 1].t, kInf});
        for (int j = k - 2; j >= 0; --j) {
            if (parity_matches(k - 1 - j)) cells.push_back({lo, hi, s.crossings[j].t, s.crossings[j + 1].t});
        }
        if (parity_matches(k)) cells.push_back({lo, hi, -kInf, s.crossings[0].t});
    }
    return cells;
}

} // namespace

double height(const BoundaryCurveFamily& family) {
    const Sweep sw = build_sweep(family);
    return sweep_heights(sw).pointwise.len;
}

TallnessVerdict classify(const BoundaryCurveFamily& family, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("classify: tol must be > 0");
    const Sweep sw = build_sweep(family);
    const Heights h = sweep_heights(sw);
    TallnessVerdict v;
    v.height = h.pointwise.len;
    v.essential_height = h.essential.len;
    if (std::abs(v.height - kPi) <= tol) {
        v.cls = TallnessClass::Borderline;
    } else if (v.height > kPi) {
        v.cls = TallnessClass::Tall;
        v.cover_plus = cells_of_side(sw, RegionSide::Plus);
        v.cover_minus = cells_of_side(sw, RegionSide::Minus);
    } else if (v.essential_height - tol >= kPi) {
        v.cls = TallnessClass::Exceptional;
    } else {
        v.cls = TallnessClass::Short;
        v.short_witness = ShortWitness{h.pointwise.theta, h.pointwise.t_lo, h.pointwise.t_hi, h.pointwise.comp};
    }
    return v;
}

std::vector<CylRect> side_cells(const BoundaryCurveFamily& family, RegionSide side) {
    return cells_of_side(build_sweep(family), side);
}

std::vector<CylRect> decompose_tall_region(const BoundaryCurveFamily& family, RegionSide side) {
    const TallnessVerdict v = classify(family);
    if (v.cls != TallnessClass::Tall)
        throw PreconditionError(std::string("decompose_tall_region: family is ") + to_string(v.cls));
    return side_cells(family, side);
}

// ---------------------------------------------------------------------------
// thin tails

std::vector<ThinTail> detect_thin_tails(const BoundaryCurveFamily& family) {
    std::vector<ThinTail> tails;
    std::set<std::tuple<int, long long, int, int, int>> seen;

    const auto& comps = family.components();
    for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci) {
        const RectilinearCurve& c = comps[ci];
        const int n = c.size();
        const auto& verts = c.vertices();
        const auto& edges = c.edges();

        std::vector<double> meridians;
        for (const CurveEdge& e : edges)
            if (!e.horizontal) meridians.push_back(e.theta0);
        std::sort(meridians.begin(), meridians.end());
        meridians.erase(std::unique(meridians.begin(), meridians.end(),
                                    [](double a, double b) { return same_angle(a, b); }),
                        meridians.end());

        for (double theta0 : meridians) {
            for (int side_i = 0; side_i < 2; ++side_i) {
                const MeridianSide side = side_i == 0 ? MeridianSide::Right : MeridianSide::Left;
                const double sgn = side == MeridianSide::Right ? 1.0 : -1.0;

                for (int ei = 0; ei < n; ++ei) {
                    const CurveEdge& seed = edges[ei];
                    if (seed.horizontal || !same_angle(seed.theta0, theta0)) continue;
                    if (std::abs(seed.t1 - seed.t0) >= kPi) continue;

                    // Grow a vertex path [a, b] (cyclic) around the seed
                    // edge, tracking the continuous angular lift measured
                    // into the chosen side. Staying on the closed side means
                    // every vertex lift lies in [0, 2*pi): dipping below 0
                    // crosses L0, reaching 2*pi touches it from the far side.
                    int a = ei, b = (ei + 1) % n;
                    std::map<int, double> lift;
                    lift[a] = 0.0;
                    lift[b] = 0.0;
                    double t_lo = std::min(seed.t0, seed.t1), t_hi = std::max(seed.t0, seed.t1);
                    auto try_extend = [&](bool forward) {
                        const int cand = forward ? (b + 1) % n : (a - 1 + n) % n;
                        if (cand == (forward ? a : b)) return false; // would close the loop
                        const CurveEdge& e = forward ? edges[b] : edges[(a - 1 + n) % n];
                        const double base = forward ? lift[b] : lift[a];
                        double l = base + (e.horizontal ? sgn * (forward ? e.dtheta : -e.dtheta) : 0.0);
                        if (std::abs(l) < kAngleEps) l = 0.0;
                        if (l < 0.0 || l > kTwoPi - 1e-9) return false;
                        const double nlo = std::min(t_lo, verts[cand].t);
                        const double nhi = std::max(t_hi, verts[cand].t);
                        if (nhi - nlo >= kPi) return false;
                        if (forward) b = cand; else a = cand;
                        lift[cand] = l;
                        t_lo = nlo;
                        t_hi = nhi;
                        return true;
                    };
                    bool fwd = true, bwd = true;
                    while (fwd || bwd) {
                        if (fwd) fwd = try_extend(true);
                        if (bwd) bwd = try_extend(false);
                    }
                    // endpoints must avoid L0
                    while (a != b && lift[a] == 0.0) a = (a + 1) % n;
                    while (b != a && lift[b] == 0.0) b = (b - 1 + n) % n;
                    int count = (b - a + n) % n + 1;
                    if (count < 3) continue;
                    // the trimmed arc must still contain the seed edge
                    const int seed_pos = (ei - a + n) % n;
                    if (seed_pos >= count - 1) continue;
                    double lo = kInf, hi = -kInf;
                    bool meets = false;
                    for (int k = 0; k < count; ++k) {
                        const int vi = (a + k) % n;
                        lo = std::min(lo, verts[vi].t);
                        hi = std::max(hi, verts[vi].t);
                        if (lift[vi] == 0.0) meets = true;
                    }
                    if (!meets || hi - lo >= kPi) continue;

                    const long long qtheta = static_cast<long long>(std::llround(theta0 * 1e9));
                    if (!seen.insert({ci, qtheta, side_i, a, count}).second) continue;

                    ThinTail tail;
                    tail.component = ci;
                    tail.first_vertex = a;
                    tail.vertex_count = count;
                    tail.barrier_meridian = theta0;
                    tail.side = side;
                    tail.strip_lo = lo - 0.5 * (kPi - (hi - lo));
                    tails.push_back(tail);
                }
            }
        }
    }
    return tails;
}

// ---------------------------------------------------------------------------
// curve surgery

namespace {

struct SoupEdge {
    BoundaryPoint a, b;  // theta normalized
    bool horizontal;
    double dtheta;       // signed arc a -> b for horizontal edges
};

std::vector<RectilinearCurve> extract_cycles(const std::vector<SoupEdge>& soup) {
    using Key = std::pair<double, double>;
    auto key_of = [](const BoundaryPoint& p) { return Key{p.theta, p.t}; };
    std::map<Key, std::vector<int>> incident;
    for (int i = 0; i < static_cast<int>(soup.size()); ++i) {
        incident[key_of(soup[i].a)].push_back(i);
        incident[key_of(soup[i].b)].push_back(i);
    }
    for (const auto& [k, v] : incident) {
        if (v.size() != 2) throw ValidationError("slot surgery produced a non-manifold vertex");
    }
    std::vector<bool> used(soup.size(), false);
    std::vector<RectilinearCurve> out;
    for (int start = 0; start < static_cast<int>(soup.size()); ++start) {
        if (used[start]) continue;
        std::vector<BoundaryPoint> raw;
        int cur = start;
        BoundaryPoint at = soup[start].a;
        double lift = at.theta;
        while (!used[cur]) {
            used[cur] = true;
            const SoupEdge& e = soup[cur];
            const bool forward = key_of(e.a) == key_of(at);
            const BoundaryPoint next = forward ? e.b : e.a;
            raw.push_back({lift, at.t});
            lift += e.horizontal ? (forward ? e.dtheta : -e.dtheta) : 0.0;
            at = next;
            const auto& inc = incident[key_of(at)];
            cur = (inc[0] == cur) ? inc[1] : inc[0];
        }
        out.emplace_back(std::move(raw));
    }
    return out;
}

} // namespace

BoundaryCurveFamily cut_vertical_slot(const BoundaryCurveFamily& family, double theta_b, double t0, double t1,
                                      double width) {
    if (!(width > 0.0) || !(t0 < t1)) throw PreconditionError("cut_vertical_slot: bad slot parameters");
    const double thl = wrap_angle(theta_b - 0.5 * width);
    const double thr = wrap_angle(theta_b + 0.5 * width);

    // locate the two mouth edges
    struct Mouth {
        int comp = -1, edge = -1;
    };
    Mouth bottom, top;
    const auto& comps = family.components();
    for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci) {
        for (const CurveEdge& e : comps[ci].edges()) {
            if (!e.horizontal) continue;
            const bool spans = e.contains_angle(thl) && e.contains_angle(thr) && e.contains_angle(theta_b);
            if (!spans) continue;
            if (std::abs(e.t0 - t0) < kTEps) {
                if (bottom.comp >= 0) throw PreconditionError("cut_vertical_slot: ambiguous bottom mouth");
                bottom = {ci, e.index};
            } else if (std::abs(e.t0 - t1) < kTEps) {
                if (top.comp >= 0) throw PreconditionError("cut_vertical_slot: ambiguous top mouth");
                top = {ci, e.index};
            }
        }
    }
    if (bottom.comp < 0 || top.comp < 0) throw PreconditionError("cut_vertical_slot: slot mouths not found");

    // slot interior must be empty
    auto arc_meets_slot = [&](const CurveEdge& e) {
        if (e.contains_angle(theta_b) || e.contains_angle(thl) || e.contains_angle(thr)) return true;
        // arc entirely inside the slot's angular range
        const double off = wrap_angle(e.theta0 - thl);
        return off < width;
    };
    for (const auto& comp : comps) {
        for (const CurveEdge& e : comp.edges()) {
            if (e.horizontal) {
                if (e.t0 > t0 + kTEps && e.t0 < t1 - kTEps && arc_meets_slot(e))
                    throw PreconditionError("cut_vertical_slot: slot interior blocked");
            } else {
                const double off = wrap_angle(e.theta0 - thl);
                const double lo = std::min(e.t0, e.t1), hi = std::max(e.t0, e.t1);
                if (off > kAngleEps && off < width - kAngleEps && hi > t0 + kTEps && lo < t1 - kTEps)
                    throw PreconditionError("cut_vertical_slot: slot interior blocked");
            }
        }
    }

    std::vector<SoupEdge> soup;
    for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci) {
        const auto& verts = comps[ci].vertices();
        const int n = comps[ci].size();
        for (const CurveEdge& e : comps[ci].edges()) {
            const BoundaryPoint a = verts[e.index];
            const BoundaryPoint b = verts[(e.index + 1) % n];
            const bool is_mouth = (ci == bottom.comp && e.index == bottom.edge) ||
                                  (ci == top.comp && e.index == top.edge);
            if (!is_mouth) {
                soup.push_back({a, b, e.horizontal, e.dtheta});
                continue;
            }
            // split the mouth edge at the slot walls, dropping the middle
            const double offl = arc_offset(e.theta0, e.dtheta, thl);
            const double offr = arc_offset(e.theta0, e.dtheta, thr);
            const double span = std::abs(e.dtheta);
            if (offl < kAngleEps || offl > span - kAngleEps || offr < kAngleEps || offr > span - kAngleEps)
                throw PreconditionError("cut_vertical_slot: slot mouth touches an edge endpoint");
            const double sgn = e.dtheta >= 0.0 ? 1.0 : -1.0;
            const double off_first = std::min(offl, offr);
            const double off_second = std::max(offl, offr);
            const double th_first = wrap_angle(e.theta0 + sgn * off_first);
            const double th_second = wrap_angle(e.theta0 + sgn * off_second);
            soup.push_back({a, {th_first, e.t0}, true, sgn * off_first});
            soup.push_back({{th_second, e.t0}, b, true, sgn * (span - off_second)});
        }
    }
    soup.push_back({{thl, t0}, {thl, t1}, false, 0.0});
    soup.push_back({{thr, t0}, {thr, t1}, false, 0.0});

    return BoundaryCurveFamily(extract_cycles(soup));
}

BoundaryCurveFamily rectangle_family(const CylRect& rect) {
    return BoundaryCurveFamily({RectilinearCurve({{rect.theta_lo, rect.t_lo},
                                                  {rect.theta_lo + rect.theta_span(), rect.t_lo},
                                                  {rect.theta_lo + rect.theta_span(), rect.t_hi},
                                                  {rect.theta_lo, rect.t_hi}})});
}

BoundaryCurveFamily add_rectangle_component(const BoundaryCurveFamily& family, const CylRect& rect) {
    std::vector<RectilinearCurve> comps = family.components();
    comps.push_back(rectangle_family(rect).components()[0]);
    return BoundaryCurveFamily(std::move(comps));
}

BoundaryCurveFamily rotate_translate(const BoundaryCurveFamily& family, double dtheta, double dt) {
    std::vector<RectilinearCurve> comps;
    for (const auto& c : family.components()) {
        std::vector<BoundaryPoint> raw;
        double lift = wrap_angle(c.vertices()[0].theta + dtheta);
        for (int i = 0; i < c.size(); ++i) {
            raw.push_back({lift, c.vertices()[i].t + dt});
            lift += c.edges()[i].dtheta;
        }
        comps.emplace_back(std::move(raw));
    }
    return BoundaryCurveFamily(std::move(comps));
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

namespace {

json rect_to_json_obj(const CylRect& r) {
    json j;
    j["theta_lo"] = r.theta_lo;
    // wrapped rectangles are emitted with theta_hi lifted past 2*pi
    j["theta_hi"] = r.wraps() ? r.theta_hi + kTwoPi : r.theta_hi;
    auto put = [&](const char* key, double v) {
        if (std::isinf(v)) j[key] = v > 0 ? "inf" : "-inf";
        else j[key] = v;
    };
    put("t_lo", r.t_lo);
    put("t_hi", r.t_hi);
    return j;
}

} // namespace

BoundaryCurveFamily family_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("curve JSON parse error: ") + e.what());
    }
    if (!j.contains("components") || !j["components"].is_array())
        throw ValidationError("curve JSON: missing components array");
    std::vector<RectilinearCurve> comps;
    for (const auto& comp : j["components"]) {
        std::vector<BoundaryPoint> raw;
        for (const auto& v : comp) {
            if (!v.contains("theta") || !v.contains("t")) throw ValidationError("curve JSON: vertex needs theta and t");
            raw.push_back({v["theta"].get<double>(), v["t"].get<double>()});
        }
        comps.emplace_back(std::move(raw));
    }
    return BoundaryCurveFamily(std::move(comps));
}

std::string family_to_json(const BoundaryCurveFamily& family) {
    json comps = json::array();
    for (const auto& c : family.components()) {
        json verts = json::array();
        double lift = c.vertices()[0].theta;
        for (int i = 0; i < c.size(); ++i) {
            verts.push_back({{"theta", lift}, {"t", c.vertices()[i].t}});
            lift += c.edges()[i].dtheta;
        }
        comps.push_back(verts);
    }
    return json{{"components", comps}}.dump(2);
}

std::string rects_to_json(const std::vector<CylRect>& rects) {
    json arr = json::array();
    for (const CylRect& r : rects) arr.push_back(rect_to_json_obj(r));
    return arr.dump(2);
}

std::string verdict_to_json(const TallnessVerdict& v) {
    json j;
    j["height"] = std::isinf(v.height) ? json("inf") : json(v.height);
    j["essential_height"] = std::isinf(v.essential_height) ? json("inf") : json(v.essential_height);
    j["class"] = to_string(v.cls);
    if (v.short_witness) {
        j["witness"] = {{"theta", v.short_witness->theta},
                        {"t_lo", v.short_witness->t_lo},
                        {"t_hi", v.short_witness->t_hi},
                        {"component", v.short_witness->component}};
    }
    if (!v.cover_plus.empty()) {
        json arr = json::array();
        for (const CylRect& r : v.cover_plus) arr.push_back(rect_to_json_obj(r));
        j["cover_plus"] = arr;
    }
    if (!v.cover_minus.empty()) {
        json arr = json::array();
        for (const CylRect& r : v.cover_minus) arr.push_back(rect_to_json_obj(r));
        j["cover_minus"] = arr;
    }
    return j.dump(2);
}

std::string tails_to_json(const std::vector<ThinTail>& tails) {
    json arr = json::array();
    for (const ThinTail& t : tails) {
        arr.push_back({{"component", t.component},
                       {"first_vertex", t.first_vertex},
                       {"vertex_count", t.vertex_count},
                       {"barrier_meridian", t.barrier_meridian},
                       {"side", t.side == MeridianSide::Right ? "right" : "left"},
                       {"strip_lo", t.strip_lo}});
    }
    return arr.dump(2);
}

} // namespace hxr
