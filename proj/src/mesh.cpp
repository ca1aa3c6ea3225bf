#include "hxr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "hxr/errors.hpp"

namespace hxr {

ProductPoint BoundaryLoop::at(double u) const {
    if (!eval_) throw PreconditionError("BoundaryLoop: empty evaluator");
    u -= std::floor(u);
    return eval_(u);
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 to_vec(const ProductPoint& p) { return {p.x, p.y, p.z}; }

// area and optional per-vertex gradient of one triangle
double tri_area_grad(const ProductPoint& pa, const ProductPoint& pb, const ProductPoint& pc,
                     std::array<Vec3, 3>* grad) {
    const Vec3 a = to_vec(pa), b = to_vec(pb), c = to_vec(pc);
    const Vec3 e1 = sub(b, a), e2 = sub(c, a);
    const Vec3 n = cross(e1, e2);
    const double sy = pa.y + pb.y + pc.y;
    const double w = 3.0 / sy;
    const double s2 = n[0] * n[0] + n[1] * n[1] + w * w * n[2] * n[2];
    const double s = std::sqrt(s2);
    const double area = 0.5 * w * s;
    if (!grad) return area;

    if (s < 1e-300) {
        for (auto& g : *grad) g = {0.0, 0.0, 0.0};
        return area;
    }
    const double dw_dy = -w * w / 3.0; // same for each vertex's y
    for (int v = 0; v < 3; ++v) {
        for (int k = 0; k < 3; ++k) {
            Vec3 de1{0, 0, 0}, de2{0, 0, 0};
            if (v == 0) {
                de1[k] = -1.0;
                de2[k] = -1.0;
            } else if (v == 1) {
                de1[k] = 1.0;
            } else {
                de2[k] = 1.0;
            }
            const Vec3 dn1 = cross(de1, e2);
            const Vec3 dn2 = cross(e1, de2);
            const Vec3 dn{dn1[0] + dn2[0], dn1[1] + dn2[1], dn1[2] + dn2[2]};
            const double dw = (k == 1) ? dw_dy : 0.0;
            const double ds = (n[0] * dn[0] + n[1] * dn[1] + w * w * n[2] * dn[2] + w * dw * n[2] * n[2]) / s;
            (*grad)[v][k] = 0.5 * (dw * s + w * ds);
        }
    }
    return area;
}

} // namespace

double triangle_area(const ProductPoint& a, const ProductPoint& b, const ProductPoint& c) {
    return tri_area_grad(a, b, c, nullptr);
}

double discrete_area(const SurfaceMesh& mesh) {
    double total = 0.0;
    for (const auto& t : mesh.triangles)
        total += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    return total;
}

std::vector<std::array<double, 3>> area_gradient(const SurfaceMesh& mesh) {
    std::vector<Vec3> g(mesh.vertices.size(), Vec3{0, 0, 0});
    std::array<Vec3, 3> local;
    for (const auto& t : mesh.triangles) {
        tri_area_grad(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]], &local);
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k) g[t[v]][k] += local[v][k];
    }
    return g;
}

std::vector<double> vertex_masses(const SurfaceMesh& mesh) {
    std::vector<double> m(mesh.vertices.size(), 0.0);
    for (const auto& t : mesh.triangles) {
        const double a = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) / 3.0;
        for (int v = 0; v < 3; ++v) m[t[v]] += a;
    }
    return m;
}

void validate_mesh(const SurfaceMesh& mesh, double min_area) {
    const int nv = mesh.vertex_count();
    if (mesh.fixed.size() != mesh.vertices.size() || mesh.boundary.size() != mesh.vertices.size())
        throw ValidationError("mesh: per-vertex arrays out of sync");
    std::map<std::pair<int, int>, int> edge_count;
    std::map<std::pair<int, int>, int> directed;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            const int i = t[k], j = t[(k + 1) % 3];
            if (i < 0 || i >= nv || j < 0 || j >= nv || i == j) throw ValidationError("mesh: bad triangle index");
            ++edge_count[{std::min(i, j), std::max(i, j)}];
            if (++directed[{i, j}] > 1) throw ValidationError("mesh: inconsistent orientation");
        }
        const double a = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        if (!(a > min_area)) throw ValidationError("mesh: degenerate triangle");
    }
    for (const auto& [e, c] : edge_count) {
        if (c > 2) throw ValidationError("mesh: non-manifold edge");
    }
    for (int i = 0; i < nv; ++i) {
        if (!(mesh.vertices[i].y > 0.0)) throw ValidationError("mesh: vertex outside the half-plane chart");
        if (mesh.fixed[i] && mesh.boundary[i].loop >= static_cast<int>(mesh.loops.size()))
            throw ValidationError("mesh: fixed vertex references a missing loop");
    }
}

MeshSignature mesh_signature(const SurfaceMesh& mesh) {
    const int nv = mesh.vertex_count();
    // union-find over vertices
    std::vector<int> parent(nv);
    for (int i = 0; i < nv; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (const auto& t : mesh.triangles) {
        unite(t[0], t[1]);
        unite(t[1], t[2]);
    }

    std::set<std::pair<int, int>> edges;
    std::map<std::pair<int, int>, int> edge_tris;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            auto e = std::minmax(t[k], t[(k + 1) % 3]);
            edges.insert({e.first, e.second});
            ++edge_tris[{e.first, e.second}];
        }
    }

    // boundary cycles: each boundary vertex has exactly two boundary edges
    std::map<int, std::vector<int>> bnext;
    for (const auto& [e, c] : edge_tris) {
        if (c == 1) {
            bnext[e.first].push_back(e.second);
            bnext[e.second].push_back(e.first);
        }
    }
    std::map<int, int> loops_per_comp;
    std::set<std::pair<int, int>> visited; // undirected
    for (const auto& [e, c] : edge_tris) {
        if (c != 1 || visited.count(e)) continue;
        const int start = e.first;
        int prev = e.first, cur = e.second;
        visited.insert(e);
        while (cur != start) {
            const auto& nbrs = bnext[cur];
            if (nbrs.size() != 2) break; // pinched boundary, count as one loop
            const int nxt = (nbrs[0] == prev) ? nbrs[1] : nbrs[0];
            visited.insert({std::min(cur, nxt), std::max(cur, nxt)});
            prev = cur;
            cur = nxt;
        }
        ++loops_per_comp[find(start)];
    }

    std::map<int, std::array<int, 3>> vef; // per root: V, E, F
    for (int i = 0; i < nv; ++i) {
        bool used = false;
        for (const auto& t : mesh.triangles)
            if (t[0] == i || t[1] == i || t[2] == i) { used = true; break; }
        if (used) ++vef[find(i)][0];
    }
    for (const auto& e : edges) ++vef[find(e.first)][1];
    for (const auto& t : mesh.triangles) ++vef[find(t[0])][2];

    MeshSignature sig;
    for (const auto& [root, counts] : vef) {
        ComponentSignature cs;
        cs.chi = counts[0] - counts[1] + counts[2];
        cs.boundary_loops = loops_per_comp.count(root) ? loops_per_comp[root] : 0;
        cs.genus = (2 - cs.chi - cs.boundary_loops) / 2;
        sig.per_component.push_back(cs);
        sig.chi += cs.chi;
        sig.boundary_loops += cs.boundary_loops;
        ++sig.components;
    }
    return sig;
}

namespace {

// loop-aware parameter midpoint (u lives on a circle)
double loop_mid(double u0, double u1) {
    double d = u1 - u0;
    if (d > 0.5) d -= 1.0;
    if (d < -0.5) d += 1.0;
    double m = u0 + 0.5 * d;
    m -= std::floor(m);
    return m;
}

} // namespace

SurfaceMesh refine(const SurfaceMesh& mesh) {
    SurfaceMesh out;
    out.vertices = mesh.vertices;
    out.fixed = mesh.fixed;
    out.boundary = mesh.boundary;
    out.loops = mesh.loops;

    std::map<std::pair<int, int>, int> edge_mid;
    std::map<std::pair<int, int>, int> edge_tris;
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            auto e = std::minmax(t[k], t[(k + 1) % 3]);
            ++edge_tris[{e.first, e.second}];
        }

    auto midpoint = [&](int i, int j) {
        auto e = std::minmax(i, j);
        auto it = edge_mid.find({e.first, e.second});
        if (it != edge_mid.end()) return it->second;
        const int idx = static_cast<int>(out.vertices.size());
        const bool boundary_edge = edge_tris[{e.first, e.second}] == 1;
        const bool same_loop = mesh.fixed[i] && mesh.fixed[j] && mesh.boundary[i].loop >= 0 &&
                               mesh.boundary[i].loop == mesh.boundary[j].loop;
        if (boundary_edge && same_loop) {
            const double u = loop_mid(mesh.boundary[i].u, mesh.boundary[j].u);
            out.vertices.push_back(mesh.loops[mesh.boundary[i].loop].at(u));
            out.fixed.push_back(true);
            out.boundary.push_back({mesh.boundary[i].loop, u});
        } else {
            const ProductPoint& a = mesh.vertices[i];
            const ProductPoint& b = mesh.vertices[j];
            out.vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y), 0.5 * (a.z + b.z)});
            out.fixed.push_back(false);
            out.boundary.push_back({-1, 0.0});
        }
        edge_mid[{e.first, e.second}] = idx;
        return idx;
    };

    for (const auto& t : mesh.triangles) {
        const int m01 = midpoint(t[0], t[1]);
        const int m12 = midpoint(t[1], t[2]);
        const int m20 = midpoint(t[2], t[0]);
        out.triangles.push_back({t[0], m01, m20});
        out.triangles.push_back({t[1], m12, m01});
        out.triangles.push_back({t[2], m20, m12});
        out.triangles.push_back({m01, m12, m20});
    }
    return out;
}

// ---------------------------------------------------------------------------
// proximity predicates (chart Euclidean)

namespace {

double clamp01(double x) { return std::max(0.0, std::min(1.0, x)); }

double seg_seg_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
    const Vec3 d1 = sub(q1, p1), d2 = sub(q2, p2), r = sub(p1, p2);
    const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double s, t;
    if (a <= 1e-30 && e <= 1e-30) {
        s = t = 0.0;
    } else if (a <= 1e-30) {
        s = 0.0;
        t = clamp01(f / e);
    } else {
        const double c = dot(d1, r);
        if (e <= 1e-30) {
            t = 0.0;
            s = clamp01(-c / a);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            s = denom > 1e-30 ? clamp01((b * f - c * e) / denom) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = clamp01(-c / a);
            } else if (t > 1.0) {
                t = 1.0;
                s = clamp01((b - c) / a);
            }
        }
    }
    const Vec3 c1{p1[0] + d1[0] * s, p1[1] + d1[1] * s, p1[2] + d1[2] * s};
    const Vec3 c2{p2[0] + d2[0] * t, p2[1] + d2[1] * t, p2[2] + d2[2] * t};
    return norm(sub(c1, c2));
}

double tri_tri_distance(const std::array<Vec3, 3>& t1, const std::array<Vec3, 3>& t2) {
    double best = 1e300;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            best = std::min(best, seg_seg_distance(t1[i], t1[(i + 1) % 3], t2[j], t2[(j + 1) % 3]));
    for (int i = 0; i < 3; ++i) {
        best = std::min(best, point_triangle_distance(t1[i], t2[0], t2[1], t2[2]));
        best = std::min(best, point_triangle_distance(t2[i], t1[0], t1[1], t1[2]));
    }
    return best;
}

// 2D helpers for the coplanar branch
bool seg_seg_2d(double ax, double ay, double bx, double by, double cx, double cy, double dx, double dy) {
    auto orient = [](double px, double py, double qx, double qy, double rx, double ry) {
        const double v = (qx - px) * (ry - py) - (qy - py) * (rx - px);
        return v > 0 ? 1 : (v < 0 ? -1 : 0);
    };
    const int o1 = orient(ax, ay, bx, by, cx, cy);
    const int o2 = orient(ax, ay, bx, by, dx, dy);
    const int o3 = orient(cx, cy, dx, dy, ax, ay);
    const int o4 = orient(cx, cy, dx, dy, bx, by);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

bool point_in_tri_2d(double px, double py, const double tx[3], const double ty[3]) {
    auto side = [&](int i, int j) {
        return (tx[j] - tx[i]) * (py - ty[i]) - (ty[j] - ty[i]) * (px - tx[i]);
    };
    const double s1 = side(0, 1), s2 = side(1, 2), s3 = side(2, 0);
    const bool neg = s1 < 0 || s2 < 0 || s3 < 0;
    const bool pos = s1 > 0 || s2 > 0 || s3 > 0;
    return !(neg && pos);
}

// proper crossing test: Moller interval overlap on the intersection line,
// with a projected 2D test for the coplanar case
bool tri_tri_cross(const std::array<Vec3, 3>& t1, const std::array<Vec3, 3>& t2) {
    const Vec3 n1 = cross(sub(t1[1], t1[0]), sub(t1[2], t1[0]));
    const Vec3 n2 = cross(sub(t2[1], t2[0]), sub(t2[2], t2[0]));
    double d1[3], d2[3];
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        d2[i] = dot(n1, sub(t2[i], t1[0]));
        d1[i] = dot(n2, sub(t1[i], t2[0]));
        scale = std::max({scale, std::abs(d1[i]), std::abs(d2[i])});
    }
    const double eps = 1e-13 * std::max(scale, 1e-30);
    for (int i = 0; i < 3; ++i) {
        if (std::abs(d1[i]) < eps) d1[i] = 0.0;
        if (std::abs(d2[i]) < eps) d2[i] = 0.0;
    }
    auto all_same_side = [](const double* d) {
        return (d[0] > 0 && d[1] > 0 && d[2] > 0) || (d[0] < 0 && d[1] < 0 && d[2] < 0);
    };
    if (all_same_side(d1) || all_same_side(d2)) return false;

    const bool coplanar = d1[0] == 0 && d1[1] == 0 && d1[2] == 0;
    if (coplanar) {
        // project onto the dominant axis of n1
        int drop = 0;
        double best = std::abs(n1[0]);
        for (int k = 1; k < 3; ++k)
            if (std::abs(n1[k]) > best) {
                best = std::abs(n1[k]);
                drop = k;
            }
        const int u = (drop + 1) % 3, v = (drop + 2) % 3;
        double ax[3], ay[3], bx[3], by[3];
        for (int i = 0; i < 3; ++i) {
            ax[i] = t1[i][u];
            ay[i] = t1[i][v];
            bx[i] = t2[i][u];
            by[i] = t2[i][v];
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (seg_seg_2d(ax[i], ay[i], ax[(i + 1) % 3], ay[(i + 1) % 3], bx[j], by[j],
                               bx[(j + 1) % 3], by[(j + 1) % 3]))
                    return true;
        if (point_in_tri_2d(bx[0], by[0], ax, ay)) return true;
        if (point_in_tri_2d(ax[0], ay[0], bx, by)) return true;
        return false;
    }

    // intervals along the intersection line
    const Vec3 D = cross(n1, n2);
    int axis = 0;
    double best = std::abs(D[0]);
    for (int k = 1; k < 3; ++k)
        if (std::abs(D[k]) > best) {
            best = std::abs(D[k]);
            axis = k;
        }
    auto interval = [&](const std::array<Vec3, 3>& t, const double* d, double& lo, double& hi) {
        lo = 1e300;
        hi = -1e300;
        for (int i = 0; i < 3; ++i) {
            if (d[i] == 0.0) {
                lo = std::min(lo, t[i][axis]);
                hi = std::max(hi, t[i][axis]);
            }
            for (int j = i + 1; j < 3; ++j) {
                if (d[i] * d[j] < 0.0) {
                    const double f = d[i] / (d[i] - d[j]);
                    const double p = t[i][axis] + f * (t[j][axis] - t[i][axis]);
                    lo = std::min(lo, p);
                    hi = std::max(hi, p);
                }
            }
        }
        return lo <= hi;
    };
    double lo1, hi1, lo2, hi2;
    if (!interval(t1, d1, lo1, hi1) || !interval(t2, d2, lo2, hi2)) return false;
    return hi1 >= lo2 && hi2 >= lo1;
}

std::array<Vec3, 3> tri_of(const SurfaceMesh& m, int t) {
    const auto& tri = m.triangles[t];
    return {to_vec(m.vertices[tri[0]]), to_vec(m.vertices[tri[1]]), to_vec(m.vertices[tri[2]])};
}

} // namespace

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Ericson-style closest point on triangle
    const Vec3 ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return norm(sub(p, a));
    const Vec3 bp = sub(p, b);
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return norm(sub(p, b));
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return norm(sub(p, Vec3{a[0] + ab[0] * v, a[1] + ab[1] * v, a[2] + ab[2] * v}));
    }
    const Vec3 cp = sub(p, c);
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return norm(sub(p, c));
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return norm(sub(p, Vec3{a[0] + ac[0] * w, a[1] + ac[1] * w, a[2] + ac[2] * w}));
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        const Vec3 bc = sub(c, b);
        return norm(sub(p, Vec3{b[0] + bc[0] * w, b[1] + bc[1] * w, b[2] + bc[2] * w}));
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    const Vec3 q{a[0] + ab[0] * v + ac[0] * w, a[1] + ab[1] * v + ac[1] * w, a[2] + ab[2] * v + ac[2] * w};
    return norm(sub(p, q));
}

bool triangles_intersect(const std::array<Vec3, 3>& t1, const std::array<Vec3, 3>& t2, double eps) {
    if (eps > 0.0) return tri_tri_distance(t1, t2) <= eps;
    return tri_tri_cross(t1, t2);
}

bool meshes_intersect(const SurfaceMesh& a, const SurfaceMesh& b, double eps) {
    for (int i = 0; i < a.triangle_count(); ++i) {
        const auto ta = tri_of(a, i);
        // bounding sphere prefilter
        const Vec3 ca{(ta[0][0] + ta[1][0] + ta[2][0]) / 3, (ta[0][1] + ta[1][1] + ta[2][1]) / 3,
                      (ta[0][2] + ta[1][2] + ta[2][2]) / 3};
        double ra = 0.0;
        for (const auto& v : ta) ra = std::max(ra, norm(sub(v, ca)));
        for (int j = 0; j < b.triangle_count(); ++j) {
            const auto tb = tri_of(b, j);
            const Vec3 cb{(tb[0][0] + tb[1][0] + tb[2][0]) / 3, (tb[0][1] + tb[1][1] + tb[2][1]) / 3,
                          (tb[0][2] + tb[1][2] + tb[2][2]) / 3};
            double rb = 0.0;
            for (const auto& v : tb) rb = std::max(rb, norm(sub(v, cb)));
            if (norm(sub(ca, cb)) > ra + rb + eps) continue;
            if (triangles_intersect(ta, tb, eps)) return true;
        }
    }
    return false;
}

double mesh_distance(const SurfaceMesh& a, const SurfaceMesh& b) {
    double best = 1e300;
    for (int i = 0; i < a.triangle_count(); ++i) {
        const auto ta = tri_of(a, i);
        for (int j = 0; j < b.triangle_count(); ++j) best = std::min(best, tri_tri_distance(ta, tri_of(b, j)));
    }
    return best;
}

bool embedded_spot_check(const SurfaceMesh& mesh, int samples, unsigned seed) {
    if (mesh.triangle_count() < 2) return true;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, mesh.triangle_count() - 1);
    for (int s = 0; s < samples; ++s) {
        const int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const auto& ti = mesh.triangles[i];
        const auto& tj = mesh.triangles[j];
        bool shares = false;
        for (int u : ti)
            for (int v : tj)
                if (u == v) shares = true;
        if (shares) continue;
        if (triangles_intersect(tri_of(mesh, i), tri_of(mesh, j), 0.0)) return false;
    }
    return true;
}

double mean_edge_length(const SurfaceMesh& mesh) {
    double total = 0.0;
    long count = 0;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            total += norm(sub(to_vec(mesh.vertices[t[k]]), to_vec(mesh.vertices[t[(k + 1) % 3]])));
            ++count;
        }
    }
    return count ? total / count : 0.0;
}

std::string mesh_to_text(const SurfaceMesh& mesh) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& v : mesh.vertices) {
        PolarPoint p{0.0, 0.0};
        try {
            p = base_polar(v);
        } catch (const PreconditionError&) {
            p = {0.0, 0.0};
        }
        os << "v " << p.rho << " " << p.theta << " " << v.z << "\n";
    }
    for (const auto& t : mesh.triangles) os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    return os.str();
}

SurfaceMesh mesh_from_text(const std::string& text) {
    SurfaceMesh mesh;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            double rho, theta, z;
            if (!(ls >> rho >> theta >> z)) throw ValidationError("mesh text: bad vertex line");
            mesh.vertices.push_back(product_point({rho, theta}, z));
        } else if (tag == "f") {
            int i, j, k;
            if (!(ls >> i >> j >> k)) throw ValidationError("mesh text: bad face line");
            mesh.triangles.push_back({i - 1, j - 1, k - 1});
        }
    }
    mesh.fixed.assign(mesh.vertices.size(), false);
    mesh.boundary.assign(mesh.vertices.size(), BoundaryRef{});
    // boundary vertices (on an edge with a single incident triangle) load as fixed
    std::map<std::pair<int, int>, int> edge_tris;
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            auto e = std::minmax(t[k], t[(k + 1) % 3]);
            ++edge_tris[{e.first, e.second}];
        }
    for (const auto& [e, c] : edge_tris) {
        if (c == 1) {
            mesh.fixed[e.first] = true;
            mesh.fixed[e.second] = true;
        }
    }
    return mesh;
}

} // namespace hxr
