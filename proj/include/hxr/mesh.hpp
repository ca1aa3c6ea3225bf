#pragma once

// Triangulated surfaces in H^2 x R, stored in the half-plane chart
// (x, y, z). Triangle areas use the product metric evaluated at the
// triangle centroid, which keeps the area and its gradient in closed form.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hxr/geometry.hpp"

namespace hxr {

// Closed parametric loop, u in [0,1). Used to pin boundary vertices and to
// re-project edge midpoints during refinement.
class BoundaryLoop {
public:
    BoundaryLoop() = default;
    explicit BoundaryLoop(std::function<ProductPoint(double)> eval) : eval_(std::move(eval)) {}
    ProductPoint at(double u) const;
    bool valid() const { return static_cast<bool>(eval_); }

private:
    std::function<ProductPoint(double)> eval_;
};

struct BoundaryRef {
    int loop = -1; // -1 for free vertices
    double u = 0.0;
};

struct SurfaceMesh {
    std::vector<ProductPoint> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<bool> fixed;            // per vertex
    std::vector<BoundaryRef> boundary;  // per vertex
    std::vector<BoundaryLoop> loops;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
};

// Throws ValidationError on non-manifold edges, inconsistent orientation,
// degenerate triangles or fixed vertices without a boundary reference.
void validate_mesh(const SurfaceMesh& mesh, double min_area = 1e-14);

double triangle_area(const ProductPoint& a, const ProductPoint& b, const ProductPoint& c);

// Total Riemannian area.
double discrete_area(const SurfaceMesh& mesh);

// Analytic gradient of discrete_area with respect to the chart coordinates
// of every vertex (fixed vertices included; callers mask them).
std::vector<std::array<double, 3>> area_gradient(const SurfaceMesh& mesh);

// One-third of the total incident triangle area per vertex (lumped mass).
std::vector<double> vertex_masses(const SurfaceMesh& mesh);

struct ComponentSignature {
    int chi = 0;
    int boundary_loops = 0;
    int genus = 0;
};

struct MeshSignature {
    int components = 0;
    int chi = 0;            // V - E + F over the whole mesh
    int boundary_loops = 0; // total
    std::vector<ComponentSignature> per_component;
};

MeshSignature mesh_signature(const SurfaceMesh& mesh);

// Midpoint 1-to-4 subdivision; boundary midpoints are re-projected onto
// their loops. Euler characteristic is unchanged.
SurfaceMesh refine(const SurfaceMesh& mesh);

// --- proximity and intersection (chart Euclidean) --------------------------

double point_triangle_distance(const std::array<double, 3>& p, const std::array<double, 3>& a,
                               const std::array<double, 3>& b, const std::array<double, 3>& c);

bool triangles_intersect(const std::array<std::array<double, 3>, 3>& t1,
                         const std::array<std::array<double, 3>, 3>& t2, double eps);

// True if any triangle of a comes within eps of a triangle of b.
bool meshes_intersect(const SurfaceMesh& a, const SurfaceMesh& b, double eps);

// Minimum pairwise distance between the two meshes' triangles (coarse:
// vertex-triangle and edge-edge distances).
double mesh_distance(const SurfaceMesh& a, const SurfaceMesh& b);

// Self-intersection spot check over random non-adjacent triangle pairs.
bool embedded_spot_check(const SurfaceMesh& mesh, int samples = 2000, unsigned seed = 1u);

// Typical chart edge length; the intersection tests thicken by a tenth of it.
double mean_edge_length(const SurfaceMesh& mesh);

// --- text format -----------------------------------------------------------

// "v rho theta z" per vertex (polar base coordinates), "f i j k" per
// triangle, 1-based indices.
std::string mesh_to_text(const SurfaceMesh& mesh);
SurfaceMesh mesh_from_text(const std::string& text); // boundary vertices become fixed

} // namespace hxr
