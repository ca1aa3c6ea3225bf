#pragma once

// Mesh-based area minimization in H^2 x R on truncated domains
// B_n x [c_lo, c_hi], plus the scenario drivers built on it: truncation
// sequences with escape detection, the translated-catenoid sweep, bridge
// solves and the constrained minimal-but-not-minimizing construction.
//
// The descent direction is the lumped-mass Riemannian gradient: the chart
// gradient with the metric raised and divided by a third of the incident
// area. That keeps stepping resolution-independent and equivariant under
// the isometries used here; backtracking on the total area makes every
// accepted step non-increasing.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hxr/catenoid.hpp"
#include "hxr/curves.hpp"
#include "hxr/errors.hpp"
#include "hxr/mesh.hpp"

namespace hxr {

struct TruncatedDomain {
    double n = 4.0;    // hyperbolic radius of B_n
    double c_lo = -1.0;
    double c_hi = 1.0;

    bool contains(const ProductPoint& p) const;
};

struct SolverConfig {
    double step = 0.05;      // initial step, adapted by the line search
    double tol_grad = 5e-5;  // stop when the mass-weighted RMS vertex speed drops below this
    int max_iters = 40000;
    int refine_levels = 0;   // uniform subdivisions applied before solving
    unsigned seed = 0;       // jitter seed (0 = no jitter)
    double jitter = 0.0;     // relative seed perturbation
};

struct SolveStats {
    int iterations = 0;
    double area = 0.0;
    double grad_norm = 0.0;
    bool converged = false;
    int constrained_vertices = 0; // vertices pressed against the constraint at the end
};

// Region test for constrained minimization: true = allowed.
using RegionTest = std::function<bool(const ProductPoint&)>;

class NonConvergence : public NumericalError {
public:
    NonConvergence(const std::string& what, SurfaceMesh best, SolveStats stats)
        : NumericalError(what), best_iterate(std::move(best)), stats(stats) {}
    SurfaceMesh best_iterate;
    SolveStats stats;
};

// Gradient descent with backtracking on the total area. Free vertices move,
// fixed ones stay. Steps that would leave the allowed region are rejected
// per vertex. Throws NonConvergence when max_iters is hit, carrying the
// best iterate.
SurfaceMesh minimize(SurfaceMesh mesh, const SolverConfig& cfg, const RegionTest* allowed = nullptr,
                     SolveStats* stats = nullptr);

// --- boundary loops and seed meshes ----------------------------------------

// Radial projection of a curve family onto the lateral cylinder of B_n at
// the curve's own heights. Every component becomes one loop.
std::vector<BoundaryLoop> radial_project(const BoundaryCurveFamily& family, double n, double C);

// Sampled polyline of a loop (for disjointness and simplicity checks).
std::vector<ProductPoint> sample_loop(const BoundaryLoop& loop, int samples);

// Horizontal circle of hyperbolic radius rho at height z.
BoundaryLoop circle_loop(double rho, double z);

// Cone-type disk spanning a loop: rings interpolating from the loop toward
// its chart centroid.
SurfaceMesh cone_disk_seed(const BoundaryLoop& loop, int rings, int segments);

// Disjoint union of cone disks over every component of a projected family.
SurfaceMesh cone_disks_seed(const BoundaryCurveFamily& family, double n, double C, int rings, int segments);

// Seed for a general Plateau solve: rectangle components get graph grids
// (whose vertex layout does not depend on the truncation radius), other
// components get cone disks.
SurfaceMesh plateau_seed(const BoundaryCurveFamily& family, double n, double C, int rings, int segments_per_unit);

// Graph-type grid seed over a rectangle footprint, pinned to the radial
// projection of the rectangle boundary at radius n.
SurfaceMesh rect_graph_seed(const CylRect& rect, double n, int res_theta, int res_t);

// Annulus interpolating two loops ring by ring.
SurfaceMesh annulus_seed(const BoundaryLoop& a, const BoundaryLoop& b, int rings, int segments);

// Flat geodesic disk of radius rho at height z (boundary fixed on the circle).
SurfaceMesh flat_disk_mesh(double rho, int rings, int segments, double z = 0.0);

// Straight vertical cylinder of radius rho between two heights, boundary
// circles fixed.
SurfaceMesh cylinder_seed(double rho, double z_lo, double z_hi, int rows, int segments);

// Rotational catenoid slice mesh out to radius rho (both halves), centered
// at height z_center; exact profile rows, all vertices free except the two
// boundary circles.
SurfaceMesh catenoid_slice_mesh(const CatenoidProfile& profile, double rho, int rows, int segments,
                                double z_center = 0.0);

SurfaceMesh apply_isometry(const Isometry& iso, SurfaceMesh mesh);

// --- scenarios -------------------------------------------------------------

enum class EscapeVerdict { Converges, Escapes, Undetermined };

const char* to_string(EscapeVerdict v);

struct EscapeReport {
    TruncatedDomain probe;
    std::vector<double> truncations;
    std::vector<long> occupancy;  // probe vertex counts per truncation
    std::vector<double> areas;
    std::vector<bool> solved;
    EscapeVerdict verdict = EscapeVerdict::Undetermined;
};

// Solve the asymptotic Plateau problem on a ladder of truncations and watch
// occupancy of a fixed probe region.
EscapeReport solve_sequence(const BoundaryCurveFamily& family, const std::vector<double>& n_list,
                            const TruncatedDomain& probe, const SolverConfig& cfg, int rings = 14,
                            int segments_per_unit = 10);

struct SweepReport {
    std::vector<double> t_grid;
    std::vector<bool> intersects;
    int first_hit = -1;              // index into t_grid, -1 = clean sweep
    bool contiguous = true;          // hits form one contiguous block
};

// Dilate a compact catenoid slice along the (source 0, sink pi) axis and
// report the first grid parameter whose image meets the target mesh.
SweepReport catenoid_sweep(const SurfaceMesh& target, double h0, const CatenoidParam& d,
                           const std::vector<double>& t_grid);

struct BridgeReport {
    BoundaryCurveFamily bridged;
    SurfaceMesh mesh_before;
    SurfaceMesh mesh_after;
    MeshSignature sig_before;
    MeshSignature sig_after;
    int components_before = 0;
    int components_after = 0;
    bool matches_prediction = false; // chi drops by one, loops +/-1
};

// Solve the family before and after cutting a vertical bridge slot.
BridgeReport bridge_solve(const BoundaryCurveFamily& family, double theta_b, double t0, double t1,
                          double thickness, double n, const SolverConfig& cfg, int rings = 12,
                          int segments_per_unit = 8);

struct MinExistScenario {
    BoundaryCurveFamily curve;      // height exactly h0
    SurfaceMesh constrained;        // critical mesh inside the mean convex region
    SolveStats constrained_stats;
    bool touches_barriers = false;
    double constrained_area = 0.0;
    double released_area = 0.0;     // after re-minimizing without barriers
    long probe_occupancy_before = 0;
    long probe_occupancy_after = 0;
    bool evidences_non_minimizing = false;
};

// Theorem-5.2-style construction: two rectangle-graph barriers plus a
// translated catenoid bound a mean convex region X; the area minimizer in X
// is a minimal surface that stops minimizing once the barriers are removed.
MinExistScenario minexist_scenario(double h0, double s, double t_dilation, double n, const SolverConfig& cfg,
                                   int res = 18);

// Lumped-mass speed of the steepest-descent direction (used as the stopping
// norm and exposed for tests).
double descent_speed_norm(const SurfaceMesh& mesh);

long parallelism_cap(); // PLATEAU_HXR_THREADS, default hardware concurrency

} // namespace hxr
