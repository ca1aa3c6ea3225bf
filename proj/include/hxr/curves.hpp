#pragma once

// Exact computational geometry for rectilinear curves on the boundary
// cylinder S^1 x R: height, tallness classification, thin-tail detection
// and tall-rectangle decomposition.
//
// A curve is an axis-aligned simple closed polygon. Vertices are stored
// with theta normalized to [0, 2*pi); every horizontal edge additionally
// carries its signed angular extent, which is taken from the raw theta
// differences of the input (so a seam-crossing edge is written with theta
// values like 5.8 -> 6.8 rather than 5.8 -> 0.5). Since the infimum in the
// height definition is attained either on an "event" meridian carrying
// vertical edges or uniformly on a slab between consecutive events, all
// predicates reduce to a finite sweep.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hxr/geometry.hpp"

namespace hxr {

// Rectangle [theta_lo, theta_hi] x [t_lo, t_hi] on the cylinder. A wrapped
// rectangle (crossing the theta = 0 seam) has theta_hi < theta_lo; the
// vertical bounds may be +/- infinity for unbounded slab cells.
struct CylRect {
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;

    double height() const { return t_hi - t_lo; }
    bool is_tall() const { return height() > kPi; }
    bool wraps() const { return theta_hi < theta_lo; }
    double theta_span() const;
    bool contains_theta(double theta) const; // closed, mod 2*pi
    bool contains(double theta, double t) const;
};

struct CurveEdge {
    int index = 0;           // edge i joins vertex i to vertex i+1 (cyclic)
    bool horizontal = false;
    double theta0 = 0.0;     // lifted start angle
    double dtheta = 0.0;     // signed extent, 0 for vertical edges
    double t0 = 0.0;
    double t1 = 0.0;         // t0 == t1 for horizontal edges

    double theta() const { return theta0; } // meridian of a vertical edge
    double t() const { return t0; }         // height of a horizontal edge
    bool contains_angle(double theta) const;
};

class RectilinearCurve {
public:
    // Vertices may carry any real theta; consecutive differences define the
    // signed arcs of horizontal edges. Throws ValidationError on malformed
    // input (self-intersection, non-alternating edges, bad closure).
    explicit RectilinearCurve(std::vector<BoundaryPoint> raw_vertices);

    const std::vector<BoundaryPoint>& vertices() const { return vertices_; }
    const std::vector<CurveEdge>& edges() const { return edges_; }
    int size() const { return static_cast<int>(vertices_.size()); }
    // -1, 0 or +1 times around the cylinder
    int winding() const { return winding_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }

private:
    std::vector<BoundaryPoint> vertices_; // theta normalized
    std::vector<CurveEdge> edges_;
    int winding_ = 0;
    double t_min_ = 0.0;
    double t_max_ = 0.0;
};

class BoundaryCurveFamily {
public:
    BoundaryCurveFamily() = default;
    explicit BoundaryCurveFamily(std::vector<RectilinearCurve> components);

    const std::vector<RectilinearCurve>& components() const { return components_; }
    bool empty() const { return components_.empty(); }
    double t_min() const;
    double t_max() const;

private:
    std::vector<RectilinearCurve> components_; // pairwise disjoint
};

enum class TallnessClass { Tall, Short, Borderline, Exceptional };

const char* to_string(TallnessClass c);

struct ShortWitness {
    double theta = 0.0;   // meridian achieving a component shorter than pi
    double t_lo = 0.0;
    double t_hi = 0.0;
    int component = -1;   // a curve bounding the witness interval
};

struct TallnessVerdict {
    double height = 0.0;           // h(Gamma), the pointwise infimum
    double essential_height = 0.0; // infimum over non-event meridians
    TallnessClass cls = TallnessClass::Short;
    std::optional<ShortWitness> short_witness;
    std::vector<CylRect> cover_plus;  // slab-cell covers for Tall verdicts
    std::vector<CylRect> cover_minus;
};

enum class MeridianSide { Left, Right };

struct ThinTail {
    int component = -1;
    int first_vertex = 0; // arc runs first_vertex .. first_vertex + count (cyclic)
    int vertex_count = 0;
    double barrier_meridian = 0.0;
    MeridianSide side = MeridianSide::Right;
    double strip_lo = 0.0; // arc fits in (strip_lo, strip_lo + pi)
};

// h(Gamma): infimum over all meridians of the component lengths of
// L_theta - Gamma. Unbounded components count as +infinity; the empty
// family returns +infinity.
double height(const BoundaryCurveFamily& family);

TallnessVerdict classify(const BoundaryCurveFamily& family, double tol = 1e-9);

std::vector<ThinTail> detect_thin_tails(const BoundaryCurveFamily& family);

enum class RegionSide { Plus, Minus };

// Slab cells of the chosen complement side. Requires a Tall family.
std::vector<CylRect> decompose_tall_region(const BoundaryCurveFamily& family, RegionSide side);

// Slab cells of a side regardless of tallness (used internally and by the
// witness machinery); cells may be short.
std::vector<CylRect> side_cells(const BoundaryCurveFamily& family, RegionSide side);

// --- curve surgery -------------------------------------------------------

// Cut a vertical slot of the given width centered on the meridian theta_b
// between the horizontal edges at heights t0 < t1. The slot mouths must lie
// strictly inside horizontal edges of the family and the slot interior must
// be empty. Joining edges of one component splits it; joining two
// components merges them.
BoundaryCurveFamily cut_vertical_slot(const BoundaryCurveFamily& family, double theta_b, double t0, double t1,
                                      double width);

// Append the boundary of a rectangle as a new component (validates
// disjointness).
BoundaryCurveFamily add_rectangle_component(const BoundaryCurveFamily& family, const CylRect& rect);

BoundaryCurveFamily rectangle_family(const CylRect& rect);

// Whole-family rigid motion on the cylinder.
BoundaryCurveFamily rotate_translate(const BoundaryCurveFamily& family, double dtheta, double dt);

// --- JSON ----------------------------------------------------------------

BoundaryCurveFamily family_from_json(const std::string& text);
std::string family_to_json(const BoundaryCurveFamily& family);
std::string verdict_to_json(const TallnessVerdict& verdict);
std::string rects_to_json(const std::vector<CylRect>& rects);
std::string tails_to_json(const std::vector<ThinTail>& tails);

} // namespace hxr
