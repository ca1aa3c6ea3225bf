#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hxr/errors.hpp"
#include "hxr/mesh.hpp"
#include "hxr/minimizer.hpp"

using namespace hxr;

TEST_CASE("flat geodesic disk area matches the closed form within 1%") {
    SurfaceMesh disk = flat_disk_mesh(1.0, 16, 48, 0.25);
    validate_mesh(disk);
    const double want = disk_area(1.0);
    CHECK(std::abs(discrete_area(disk) - want) / want < 0.01);

    // refinement brings it closer
    SurfaceMesh fine = refine(disk);
    CHECK(std::abs(discrete_area(fine) - want) < std::abs(discrete_area(disk) - want));
}

TEST_CASE("vertical cylinder area is linear in height within 1%") {
    SurfaceMesh patch = cylinder_seed(1.0, 0.0, 1.0, 12, 48);
    SurfaceMesh tall = cylinder_seed(1.0, 0.0, 2.0, 24, 48);
    const double a1 = discrete_area(patch);
    const double a2 = discrete_area(tall);
    CHECK(std::abs(a2 - 2.0 * a1) / (2.0 * a1) < 0.01);
}

TEST_CASE("analytic area gradient matches central finite differences") {
    std::mt19937 rng(2024u);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    SurfaceMesh mesh = flat_disk_mesh(1.2, 5, 12, 0.0);
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (mesh.fixed[i]) continue;
        mesh.vertices[i].x += 0.1 * u(rng);
        mesh.vertices[i].y += 0.1 * u(rng);
        mesh.vertices[i].z += 0.3 * u(rng);
    }
    const auto grad = area_gradient(mesh);
    std::uniform_int_distribution<int> pick(0, mesh.vertex_count() - 1);
    int tested = 0;
    while (tested < 40) {
        const int i = pick(rng);
        const int k = tested % 3;
        const double h = 1e-6;
        SurfaceMesh pl = mesh, mi = mesh;
        auto bump = [&](SurfaceMesh& m, double delta) {
            if (k == 0) m.vertices[i].x += delta;
            if (k == 1) m.vertices[i].y += delta;
            if (k == 2) m.vertices[i].z += delta;
        };
        bump(pl, h);
        bump(mi, -h);
        const double fd = (discrete_area(pl) - discrete_area(mi)) / (2.0 * h);
        const double an = grad[i][k];
        const double scale = std::max({std::abs(fd), std::abs(an), 1e-3});
        CHECK(std::abs(fd - an) / scale < 1e-5);
        ++tested;
    }
}

TEST_CASE("mesh signatures") {
    SurfaceMesh disk = flat_disk_mesh(1.0, 6, 18);
    MeshSignature s1 = mesh_signature(disk);
    CHECK(s1.components == 1);
    CHECK(s1.chi == 1);
    CHECK(s1.boundary_loops == 1);
    CHECK(s1.per_component[0].genus == 0);

    SurfaceMesh tube = cylinder_seed(1.0, 0.0, 1.0, 8, 24);
    MeshSignature s2 = mesh_signature(tube);
    CHECK(s2.chi == 0);
    CHECK(s2.boundary_loops == 2);
    CHECK(s2.per_component[0].genus == 0);

    // genus arithmetic stays a non-negative integer
    for (const auto& cs : s2.per_component) CHECK(2 - cs.chi - cs.boundary_loops == 2 * cs.genus);
}

TEST_CASE("refinement combinatorics and boundary re-projection") {
    SurfaceMesh disk = flat_disk_mesh(1.0, 6, 18, -0.5);
    const int V = disk.vertex_count();
    const int F = disk.triangle_count();
    int E = 0;
    {
        std::set<std::pair<int, int>> edges;
        for (const auto& t : disk.triangles)
            for (int k = 0; k < 3; ++k) {
                auto e = std::minmax(t[k], t[(k + 1) % 3]);
                edges.insert({e.first, e.second});
            }
        E = static_cast<int>(edges.size());
    }
    SurfaceMesh fine = refine(disk);
    CHECK(fine.vertex_count() == V + E);
    CHECK(fine.triangle_count() == 4 * F);
    CHECK(mesh_signature(fine).chi == mesh_signature(disk).chi);

    // boundary midpoints sit exactly on the circle of radius 1
    for (int i = 0; i < fine.vertex_count(); ++i) {
        if (!fine.fixed[i]) continue;
        const PolarPoint p = base_polar(fine.vertices[i]);
        CHECK(p.rho == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fine.vertices[i].z == doctest::Approx(-0.5));
    }
}

TEST_CASE("triangle intersection predicates") {
    using V = std::array<double, 3>;
    std::array<V, 3> flat = {V{0, 1, 0}, V{1, 1, 0}, V{0, 2, 0}};
    std::array<V, 3> pierce = {V{0.2, 1.2, -1}, V{0.3, 1.3, 1}, V{0.25, 1.2, 1}};
    std::array<V, 3> away = {V{0, 1, 5}, V{1, 1, 5}, V{0, 2, 5}};
    CHECK(triangles_intersect(flat, pierce, 0.0));
    CHECK(!triangles_intersect(flat, away, 0.0));
    CHECK(!triangles_intersect(flat, away, 1.0));
    CHECK(triangles_intersect(flat, away, 5.1));

    CHECK(point_triangle_distance({0.2, 1.2, 1.0}, flat[0], flat[1], flat[2]) == doctest::Approx(1.0));
    CHECK(point_triangle_distance({-1.0, 1.0, 0.0}, flat[0], flat[1], flat[2]) == doctest::Approx(1.0));
}

TEST_CASE("mesh text format round trip") {
    SurfaceMesh disk = flat_disk_mesh(0.8, 4, 12, 0.3);
    const std::string text = mesh_to_text(disk);
    SurfaceMesh back = mesh_from_text(text);
    REQUIRE(back.vertex_count() == disk.vertex_count());
    REQUIRE(back.triangle_count() == disk.triangle_count());
    for (int i = 0; i < disk.vertex_count(); ++i) {
        CHECK(product_distance(back.vertices[i], disk.vertices[i]) < 1e-12);
        CHECK(back.fixed[i] == disk.fixed[i]); // boundary inferred from connectivity
    }
    CHECK_THROWS_AS(mesh_from_text("v 1 2\n"), ValidationError);
}

TEST_CASE("mesh validation catches defects") {
    SurfaceMesh disk = flat_disk_mesh(0.8, 3, 9);
    validate_mesh(disk);
    SurfaceMesh bad = disk;
    bad.triangles.push_back(bad.triangles[0]); // duplicates an oriented edge
    CHECK_THROWS_AS(validate_mesh(bad), ValidationError);

    SurfaceMesh degenerate = disk;
    degenerate.triangles.push_back({0, 1, 1});
    CHECK_THROWS_AS(validate_mesh(degenerate), ValidationError);
}

TEST_CASE("embedded spot check accepts the disk") {
    CHECK(embedded_spot_check(flat_disk_mesh(1.0, 8, 24), 3000));
}
