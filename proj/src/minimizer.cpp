#include "hxr/minimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "hxr/errors.hpp"

namespace hxr {

bool TruncatedDomain::contains(const ProductPoint& p) const {
    if (p.z < c_lo || p.z > c_hi) return false;
    return hyperbolic_distance({p.x, p.y}, {0.0, 1.0}) <= n;
}

long parallelism_cap() {
    if (const char* env = std::getenv("PLATEAU_HXR_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return v;
    }
    const long hw = static_cast<long>(std::thread::hardware_concurrency());
    return hw > 0 ? hw : 1;
}

namespace {

void parallel_for(int count, const std::function<void(int)>& fn) {
    const long cap = std::min<long>(parallelism_cap(), count);
    if (cap <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (long w = 0; w < cap; ++w) {
        pool.emplace_back([&]() {
            int i;
            while ((i = next.fetch_add(1)) < count) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

struct Velocity {
    std::vector<std::array<double, 3>> v;
    std::vector<double> speed;    // Riemannian magnitude per vertex
    std::vector<double> cap;      // local displacement cap (mesh scale)
    double rms_speed = 0.0;       // mass-weighted
};

Velocity descent_velocity(const SurfaceMesh& mesh) {
    const auto grad = area_gradient(mesh);
    const auto mass = vertex_masses(mesh);
    Velocity out;
    out.v.assign(mesh.vertices.size(), {0.0, 0.0, 0.0});
    out.speed.assign(mesh.vertices.size(), 0.0);
    out.cap.assign(mesh.vertices.size(), 0.0);
    double wsum = 0.0, acc = 0.0;
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        if (mesh.fixed[i]) continue;
        const double m = std::max(mass[i], 1e-14);
        const double y = mesh.vertices[i].y;
        // raise the chart gradient with the inverse metric, then mass-lump
        const double vx = y * y * grad[i][0] / m;
        const double vy = y * y * grad[i][1] / m;
        const double vz = grad[i][2] / m;
        out.v[i] = {vx, vy, vz};
        const double speed = std::sqrt((vx * vx + vy * vy) / (y * y) + vz * vz);
        out.speed[i] = speed;
        // sliver triangles make 1/m blow up; cap the per-step displacement
        // at the local mesh scale so they cannot freeze the line search
        out.cap[i] = 2.0 * std::sqrt(m);
        acc += mass[i] * speed * speed;
        wsum += mass[i];
    }
    out.rms_speed = wsum > 0.0 ? std::sqrt(acc / wsum) : 0.0;
    return out;
}

} // namespace

double descent_speed_norm(const SurfaceMesh& mesh) { return descent_velocity(mesh).rms_speed; }

SurfaceMesh minimize(SurfaceMesh mesh, const SolverConfig& cfg, const RegionTest* allowed, SolveStats* stats) {
    for (int r = 0; r < cfg.refine_levels; ++r) mesh = refine(mesh);
    if (cfg.jitter > 0.0 && cfg.seed != 0) {
        std::mt19937 rng(cfg.seed);
        std::normal_distribution<double> gauss(0.0, cfg.jitter * mean_edge_length(mesh));
        for (int i = 0; i < mesh.vertex_count(); ++i) {
            if (mesh.fixed[i]) continue;
            ProductPoint& p = mesh.vertices[i];
            p.x += gauss(rng);
            p.y = std::max(0.1 * p.y, p.y + gauss(rng));
            p.z += gauss(rng);
        }
    }

    double area = discrete_area(mesh);
    double step = cfg.step;
    SolveStats st;
    st.area = area;

    std::vector<ProductPoint> trial(mesh.vertices.size());
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        const Velocity vel = descent_velocity(mesh);
        st.grad_norm = vel.rms_speed;
        if (vel.rms_speed <= cfg.tol_grad) {
            st.converged = true;
            break;
        }
        bool accepted = false;
        // pass 0: clamped lumped direction; pass 1: raw Riemannian gradient
        // (the clamp can spoil the descent property on bad cells)
        for (int pass = 0; pass < 2 && !accepted; ++pass) {
            std::vector<std::array<double, 3>> dir;
            double trial_step = step;
            if (pass == 1) {
                const auto grad = area_gradient(mesh);
                dir.assign(mesh.vertices.size(), {0.0, 0.0, 0.0});
                double top = 0.0;
                for (int i = 0; i < mesh.vertex_count(); ++i) {
                    if (mesh.fixed[i]) continue;
                    const double y = mesh.vertices[i].y;
                    dir[i] = {y * y * grad[i][0], y * y * grad[i][1], grad[i][2]};
                    const double sp = std::sqrt((dir[i][0] * dir[i][0] + dir[i][1] * dir[i][1]) / (y * y) +
                                                dir[i][2] * dir[i][2]);
                    top = std::max(top, sp);
                }
                if (top <= 0.0) break;
                trial_step = 0.05 * mean_edge_length(mesh) / top;
            }
            for (int back = 0; back < 60; ++back) {
                trial = mesh.vertices;
                int pressed = 0;
                bool geometry_ok = true;
                for (int i = 0; i < mesh.vertex_count() && geometry_ok; ++i) {
                    if (mesh.fixed[i]) continue;
                    ProductPoint p = mesh.vertices[i];
                    double scale = trial_step;
                    if (pass == 0) {
                        const double disp = trial_step * vel.speed[i];
                        if (disp > vel.cap[i]) scale = trial_step * vel.cap[i] / disp;
                    }
                    const auto& d = pass == 0 ? vel.v[i] : dir[i];
                    p.x -= scale * d[0];
                    p.y -= scale * d[1];
                    p.z -= scale * d[2];
                    if (p.y <= 0.0) {
                        geometry_ok = false;
                        break;
                    }
                    if (allowed && !(*allowed)(p)) {
                        ++pressed; // vertex stays put this step
                        continue;
                    }
                    trial[i] = p;
                }
                if (geometry_ok) {
                    std::swap(mesh.vertices, trial);
                    const double new_area = discrete_area(mesh);
                    if (new_area <= area) {
                        area = new_area;
                        st.constrained_vertices = pressed;
                        accepted = true;
                        if (pass == 0) step = std::min(trial_step * 1.4, 10.0);
                        break;
                    }
                    std::swap(mesh.vertices, trial); // revert
                }
                trial_step *= 0.5;
                if (pass == 0) step = trial_step;
                if (trial_step < 1e-16) break;
            }
        }
        if (!accepted) break; // numerical floor
        st.area = area;
    }
    st.iterations = iter;
    st.area = area;
    if (stats) *stats = st;
    if (!st.converged && iter >= cfg.max_iters)
        throw NonConvergence("minimize: max_iters exceeded", mesh, st);
    return mesh;
}

// ---------------------------------------------------------------------------
// loops and seeds

std::vector<BoundaryLoop> radial_project(const BoundaryCurveFamily& family, double n, double C) {
    if (family.t_min() < -C || family.t_max() > C)
        throw PreconditionError("radial_project: curve t-range exceeds the slab");
    std::vector<BoundaryLoop> loops;
    for (const auto& comp : family.components()) {
        // cumulative (theta, t) length; independent of the truncation radius
        // so projections at different n share the parametrization
        struct Leg {
            double acc;
            CurveEdge e;
        };
        std::vector<Leg> legs;
        double total = 0.0;
        for (const CurveEdge& e : comp.edges()) {
            const double len = e.horizontal ? std::abs(e.dtheta) : std::abs(e.t1 - e.t0);
            legs.push_back({total, e});
            total += std::max(len, 1e-12);
        }
        loops.emplace_back([legs, total, n](double u) {
            const double s = u * total;
            size_t k = legs.size() - 1;
            for (size_t i = 0; i + 1 < legs.size(); ++i) {
                if (s < legs[i + 1].acc) {
                    k = i;
                    break;
                }
            }
            const CurveEdge& e = legs[k].e;
            const double seg = (k + 1 < legs.size() ? legs[k + 1].acc : total) - legs[k].acc;
            const double f = std::clamp((s - legs[k].acc) / seg, 0.0, 1.0);
            const double theta = e.horizontal ? e.theta0 + f * e.dtheta : e.theta0;
            const double t = e.horizontal ? e.t0 : e.t0 + f * (e.t1 - e.t0);
            return product_point({n, theta}, t);
        });
    }
    return loops;
}

std::vector<ProductPoint> sample_loop(const BoundaryLoop& loop, int samples) {
    std::vector<ProductPoint> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i) out.push_back(loop.at(static_cast<double>(i) / samples));
    return out;
}

BoundaryLoop circle_loop(double rho, double z) {
    return BoundaryLoop([rho, z](double u) { return product_point({rho, kTwoPi * u}, z); });
}

namespace {

void push_ring_strip(SurfaceMesh& mesh, int ring_a_start, int ring_b_start, int segments, bool flip = false) {
    for (int k = 0; k < segments; ++k) {
        const int a0 = ring_a_start + k, a1 = ring_a_start + (k + 1) % segments;
        const int b0 = ring_b_start + k, b1 = ring_b_start + (k + 1) % segments;
        if (!flip) {
            mesh.triangles.push_back({a0, a1, b0});
            mesh.triangles.push_back({a1, b1, b0});
        } else {
            mesh.triangles.push_back({a0, b0, a1});
            mesh.triangles.push_back({a1, b0, b1});
        }
    }
}

} // namespace

SurfaceMesh cone_disk_seed(const BoundaryLoop& loop, int rings, int segments) {
    if (rings < 2 || segments < 3) throw PreconditionError("cone_disk_seed: trivial resolution");
    SurfaceMesh mesh;
    mesh.loops.push_back(loop);
    const auto bnd = sample_loop(loop, segments);
    ProductPoint apex{0.0, 0.0, 0.0};
    for (const auto& p : bnd) {
        apex.x += p.x / segments;
        apex.y += p.y / segments;
        apex.z += p.z / segments;
    }
    for (int r = 0; r < rings; ++r) {
        const double f = static_cast<double>(r) / rings;
        for (int k = 0; k < segments; ++k) {
            const ProductPoint& b = bnd[k];
            mesh.vertices.push_back({b.x + f * (apex.x - b.x), b.y + f * (apex.y - b.y), b.z + f * (apex.z - b.z)});
            mesh.fixed.push_back(r == 0);
            mesh.boundary.push_back(r == 0 ? BoundaryRef{0, static_cast<double>(k) / segments} : BoundaryRef{});
        }
    }
    const int apex_idx = mesh.vertex_count();
    mesh.vertices.push_back(apex);
    mesh.fixed.push_back(false);
    mesh.boundary.push_back({});
    for (int r = 0; r + 1 < rings; ++r) push_ring_strip(mesh, r * segments, (r + 1) * segments, segments);
    const int last = (rings - 1) * segments;
    for (int k = 0; k < segments; ++k)
        mesh.triangles.push_back({last + k, last + (k + 1) % segments, apex_idx});
    return mesh;
}

namespace {

// merge b into a, remapping loop and vertex indices
void append_mesh(SurfaceMesh& a, const SurfaceMesh& b) {
    const int voff = a.vertex_count();
    const int loff = static_cast<int>(a.loops.size());
    a.loops.insert(a.loops.end(), b.loops.begin(), b.loops.end());
    a.vertices.insert(a.vertices.end(), b.vertices.begin(), b.vertices.end());
    a.fixed.insert(a.fixed.end(), b.fixed.begin(), b.fixed.end());
    for (const BoundaryRef& r : b.boundary)
        a.boundary.push_back(r.loop >= 0 ? BoundaryRef{r.loop + loff, r.u} : r);
    for (const auto& t : b.triangles) a.triangles.push_back({t[0] + voff, t[1] + voff, t[2] + voff});
}

double loop_theta_extent(const RectilinearCurve& c) {
    double len = 0.0;
    for (const CurveEdge& e : c.edges()) len += e.horizontal ? std::abs(e.dtheta) : 0.0;
    return len;
}

} // namespace

SurfaceMesh cone_disks_seed(const BoundaryCurveFamily& family, double n, double C, int rings,
                            int segments_per_unit) {
    const auto loops = radial_project(family, n, C);
    SurfaceMesh mesh;
    for (size_t i = 0; i < loops.size(); ++i) {
        const double extent = loop_theta_extent(family.components()[i]) +
                              (family.components()[i].t_max() - family.components()[i].t_min()) / std::max(1.0, n);
        const int segments = std::clamp(static_cast<int>(segments_per_unit * extent), 16, 256);
        append_mesh(mesh, cone_disk_seed(loops[i], rings, segments));
    }
    return mesh;
}

SurfaceMesh rect_graph_seed(const CylRect& rect, double n, int res_theta, int res_t) {
    if (res_theta < 2 || res_t < 2) throw PreconditionError("rect_graph_seed: trivial resolution");
    const double span = rect.theta_span();
    const double h = rect.height();
    const double sinh_n = std::sinh(n);
    // perimeter loop: bottom, right, top (reversed), left
    const double wb = span * sinh_n, wr = h, wt = span * sinh_n, wl = h;
    const double per = wb + wr + wt + wl;
    const CylRect r = rect;
    BoundaryLoop loop([r, n, wb, wr, wt, wl, per](double u) {
        double s = u * per;
        double theta, t;
        const double span = r.theta_span();
        if (s < wb) {
            theta = r.theta_lo + span * (s / wb);
            t = r.t_lo;
        } else if ((s -= wb) < wr) {
            theta = r.theta_lo + span;
            t = r.t_lo + (r.t_hi - r.t_lo) * (s / wr);
        } else if ((s -= wr) < wt) {
            theta = r.theta_lo + span * (1.0 - s / wt);
            t = r.t_hi;
        } else {
            s -= wt;
            theta = r.theta_lo;
            t = r.t_hi - (r.t_hi - r.t_lo) * (std::min(s, wl) / wl);
        }
        return product_point({n, theta}, t);
    });

    SurfaceMesh mesh;
    mesh.loops.push_back(loop);
    auto u_of = [&](int i, int j) -> double {
        // perimeter parameter of a boundary grid vertex
        const double fu = static_cast<double>(i) / res_theta;
        const double fv = static_cast<double>(j) / res_t;
        if (j == 0) return (wb * fu) / per;
        if (i == res_theta) return (wb + wr * fv) / per;
        if (j == res_t) return (wb + wr + wt * (1.0 - fu)) / per;
        return (wb + wr + wt + wl * (1.0 - fv)) / per;
    };
    for (int j = 0; j <= res_t; ++j) {
        for (int i = 0; i <= res_theta; ++i) {
            const double fu = static_cast<double>(i) / res_theta;
            const double fv = static_cast<double>(j) / res_t;
            const bool on_boundary = i == 0 || j == 0 || i == res_theta || j == res_t;
            const double theta = rect.theta_lo + span * fu;
            const double t = rect.t_lo + h * fv;
            const double depth = std::sin(kPi * fu) * std::sin(kPi * fv);
            const double radius = on_boundary ? n : n * (1.0 - 0.85 * depth);
            mesh.vertices.push_back(product_point({radius, theta}, t));
            mesh.fixed.push_back(on_boundary);
            mesh.boundary.push_back(on_boundary ? BoundaryRef{0, u_of(i, j)} : BoundaryRef{});
        }
    }
    auto idx = [&](int i, int j) { return j * (res_theta + 1) + i; };
    for (int j = 0; j < res_t; ++j) {
        for (int i = 0; i < res_theta; ++i) {
            mesh.triangles.push_back({idx(i, j), idx(i + 1, j), idx(i, j + 1)});
            mesh.triangles.push_back({idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    }
    return mesh;
}

SurfaceMesh annulus_seed(const BoundaryLoop& a, const BoundaryLoop& b, int rings, int segments) {
    if (rings < 1 || segments < 3) throw PreconditionError("annulus_seed: trivial resolution");
    auto pa = sample_loop(a, segments);
    auto pb = sample_loop(b, segments);
    // align parametrizations: best cyclic shift and orientation of b
    double best = 1e300;
    int best_shift = 0;
    bool best_rev = false;
    for (int rev = 0; rev < 2; ++rev) {
        for (int shift = 0; shift < segments; ++shift) {
            double cost = 0.0;
            for (int k = 0; k < segments; ++k) {
                const int kb = rev ? (shift - k + 2 * segments) % segments : (shift + k) % segments;
                const double dx = pa[k].x - pb[kb].x, dy = pa[k].y - pb[kb].y, dz = pa[k].z - pb[kb].z;
                cost += dx * dx + dy * dy + dz * dz;
                if (cost > best) break;
            }
            if (cost < best) {
                best = cost;
                best_shift = shift;
                best_rev = rev == 1;
            }
        }
    }

    SurfaceMesh mesh;
    mesh.loops.push_back(a);
    mesh.loops.push_back(b);
    for (int r = 0; r <= rings; ++r) {
        const double f = static_cast<double>(r) / rings;
        for (int k = 0; k < segments; ++k) {
            const int kb = best_rev ? (best_shift - k + 2 * segments) % segments : (best_shift + k) % segments;
            const ProductPoint& p = pa[k];
            const ProductPoint& q = pb[kb];
            mesh.vertices.push_back({p.x + f * (q.x - p.x), p.y + f * (q.y - p.y), p.z + f * (q.z - p.z)});
            mesh.fixed.push_back(r == 0 || r == rings);
            if (r == 0)
                mesh.boundary.push_back({0, static_cast<double>(k) / segments});
            else if (r == rings)
                mesh.boundary.push_back({1, static_cast<double>(kb) / segments});
            else
                mesh.boundary.push_back({});
        }
    }
    for (int r = 0; r < rings; ++r) push_ring_strip(mesh, r * segments, (r + 1) * segments, segments);
    return mesh;
}

SurfaceMesh flat_disk_mesh(double rho, int rings, int segments, double z) {
    if (rings < 1 || segments < 3) throw PreconditionError("flat_disk_mesh: trivial resolution");
    SurfaceMesh mesh;
    mesh.loops.push_back(circle_loop(rho, z));
    // center
    mesh.vertices.push_back(product_point({0.0, 0.0}, z));
    mesh.fixed.push_back(false);
    mesh.boundary.push_back({});
    for (int r = 1; r <= rings; ++r) {
        const double rr = rho * r / rings;
        for (int k = 0; k < segments; ++k) {
            mesh.vertices.push_back(product_point({rr, kTwoPi * k / segments}, z));
            mesh.fixed.push_back(r == rings);
            mesh.boundary.push_back(r == rings ? BoundaryRef{0, static_cast<double>(k) / segments}
                                               : BoundaryRef{});
        }
    }
    auto ring_start = [&](int r) { return 1 + (r - 1) * segments; };
    for (int k = 0; k < segments; ++k)
        mesh.triangles.push_back({0, ring_start(1) + k, ring_start(1) + (k + 1) % segments});
    for (int r = 1; r < rings; ++r) push_ring_strip(mesh, ring_start(r), ring_start(r + 1), segments, true);
    return mesh;
}

SurfaceMesh cylinder_seed(double rho, double z_lo, double z_hi, int rows, int segments) {
    if (rows < 1 || segments < 3) throw PreconditionError("cylinder_seed: trivial resolution");
    SurfaceMesh mesh;
    mesh.loops.push_back(circle_loop(rho, z_lo));
    mesh.loops.push_back(circle_loop(rho, z_hi));
    for (int j = 0; j <= rows; ++j) {
        const double z = z_lo + (z_hi - z_lo) * j / rows;
        for (int k = 0; k < segments; ++k) {
            mesh.vertices.push_back(product_point({rho, kTwoPi * k / segments}, z));
            mesh.fixed.push_back(j == 0 || j == rows);
            if (j == 0)
                mesh.boundary.push_back({0, static_cast<double>(k) / segments});
            else if (j == rows)
                mesh.boundary.push_back({1, static_cast<double>(k) / segments});
            else
                mesh.boundary.push_back({});
        }
    }
    for (int j = 0; j < rows; ++j) push_ring_strip(mesh, j * segments, (j + 1) * segments, segments);
    return mesh;
}

SurfaceMesh catenoid_slice_mesh(const CatenoidProfile& profile, double rho, int rows, int segments,
                                double z_center) {
    if (rho <= profile.girth()) throw PreconditionError("catenoid_slice_mesh: rho below the girth");
    if (rows < 2 || segments < 3) throw PreconditionError("catenoid_slice_mesh: trivial resolution");
    SurfaceMesh mesh;
    const double lam_top = profile.lambda_at(rho);
    mesh.loops.push_back(circle_loop(rho, z_center + lam_top));
    mesh.loops.push_back(circle_loop(rho, z_center - lam_top));
    const int total_rows = 2 * rows + 1;
    for (int j = 0; j < total_rows; ++j) {
        const double s = 1.0 - static_cast<double>(j) / rows; // 1 .. -1
        const double rr = profile.girth() + (rho - profile.girth()) * s * s;
        const double z = z_center + (s >= 0 ? 1.0 : -1.0) * profile.lambda_at(rr);
        for (int k = 0; k < segments; ++k) {
            mesh.vertices.push_back(product_point({rr, kTwoPi * k / segments}, z));
            const bool fixed = j == 0 || j == total_rows - 1;
            mesh.fixed.push_back(fixed);
            if (j == 0)
                mesh.boundary.push_back({0, static_cast<double>(k) / segments});
            else if (j == total_rows - 1)
                mesh.boundary.push_back({1, static_cast<double>(k) / segments});
            else
                mesh.boundary.push_back({});
        }
    }
    for (int j = 0; j + 1 < total_rows; ++j) push_ring_strip(mesh, j * segments, (j + 1) * segments, segments);
    return mesh;
}

SurfaceMesh apply_isometry(const Isometry& iso, SurfaceMesh mesh) {
    for (ProductPoint& p : mesh.vertices) p = iso.apply(p);
    for (BoundaryLoop& loop : mesh.loops) {
        BoundaryLoop old = loop;
        loop = BoundaryLoop([iso, old](double u) { return iso.apply(old.at(u)); });
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// scenarios

const char* to_string(EscapeVerdict v) {
    switch (v) {
        case EscapeVerdict::Converges: return "Converges";
        case EscapeVerdict::Escapes: return "Escapes";
        case EscapeVerdict::Undetermined: return "Undetermined";
    }
    return "?";
}

namespace {

// A component whose curve is a plain rectangle seeds better (and with an
// n-independent vertex layout) as a graph grid over its footprint.
std::optional<CylRect> as_plain_rectangle(const RectilinearCurve& c) {
    if (c.size() != 4 || c.winding() != 0) return std::nullopt;
    double th_lo = 0.0, span = 0.0;
    for (const CurveEdge& e : c.edges()) {
        if (e.horizontal) {
            span = std::abs(e.dtheta);
            th_lo = e.dtheta > 0 ? e.theta0 : wrap_angle(e.theta0 + e.dtheta);
        }
    }
    CylRect r{th_lo, wrap_angle(th_lo + span), c.t_min(), c.t_max()};
    if (r.theta_hi == r.theta_lo) return std::nullopt;
    return r;
}

} // namespace

SurfaceMesh plateau_seed(const BoundaryCurveFamily& family, double n, double C, int rings,
                         int segments_per_unit) {
    SurfaceMesh mesh;
    const auto loops = radial_project(family, n, C);
    for (size_t i = 0; i < family.components().size(); ++i) {
        const auto& comp = family.components()[i];
        if (auto rect = as_plain_rectangle(comp)) {
            const int rt = std::clamp(static_cast<int>(segments_per_unit * rect->theta_span()), 8, 96);
            const int rv = std::clamp(static_cast<int>(segments_per_unit * rect->height()), 8, 96);
            append_mesh(mesh, rect_graph_seed(*rect, n, rt, rv));
        } else {
            const double extent =
                loop_theta_extent(comp) + (comp.t_max() - comp.t_min()) / std::max(1.0, n);
            const int segments = std::clamp(static_cast<int>(segments_per_unit * extent), 16, 256);
            append_mesh(mesh, cone_disk_seed(loops[i], rings, segments));
        }
    }
    return mesh;
}

EscapeReport solve_sequence(const BoundaryCurveFamily& family, const std::vector<double>& n_list,
                            const TruncatedDomain& probe, const SolverConfig& cfg, int rings,
                            int segments_per_unit) {
    for (size_t i = 1; i < n_list.size(); ++i)
        if (!(n_list[i] > n_list[i - 1])) throw PreconditionError("solve_sequence: n_list must increase");
    if (!n_list.empty() && probe.n >= n_list.front())
        throw PreconditionError("solve_sequence: probe must sit inside the smallest truncation");

    const double C = std::max(std::abs(family.t_min()), std::abs(family.t_max())) + 1.0;
    EscapeReport rep;
    rep.probe = probe;
    rep.truncations = n_list;
    rep.occupancy.assign(n_list.size(), 0);
    rep.areas.assign(n_list.size(), 0.0);
    rep.solved.assign(n_list.size(), false);

    parallel_for(static_cast<int>(n_list.size()), [&](int i) {
        SurfaceMesh mesh = plateau_seed(family, n_list[i], C, rings, segments_per_unit);
        SolveStats st;
        bool ok = true;
        try {
            mesh = minimize(std::move(mesh), cfg, nullptr, &st);
        } catch (const NonConvergence& nc) {
            mesh = nc.best_iterate;
            st = nc.stats;
            ok = false;
        }
        long occ = 0;
        for (const ProductPoint& p : mesh.vertices)
            if (probe.contains(p)) ++occ;
        rep.occupancy[i] = occ;
        rep.areas[i] = st.area;
        rep.solved[i] = ok;
    });

    const size_t m = rep.occupancy.size();
    if (m >= 3) {
        const long a = rep.occupancy[m - 3], b = rep.occupancy[m - 2], c = rep.occupancy[m - 1];
        const long hi = std::max({a, b, c}), lo = std::min({a, b, c});
        if (lo > 0 && (hi - lo) <= 0.1 * hi) {
            rep.verdict = EscapeVerdict::Converges;
        } else {
            // escaped: occupancy reaches zero and stays there
            bool tail_zero = false;
            for (size_t k = 0; k < m; ++k) {
                if (rep.occupancy[k] == 0) {
                    tail_zero = true;
                    for (size_t j = k; j < m; ++j) tail_zero = tail_zero && rep.occupancy[j] == 0;
                    if (tail_zero) break;
                }
            }
            rep.verdict = tail_zero ? EscapeVerdict::Escapes : EscapeVerdict::Undetermined;
        }
    }
    return rep;
}

SweepReport catenoid_sweep(const SurfaceMesh& target, double h0, const CatenoidParam& d,
                           const std::vector<double>& t_grid) {
    if (!(h0 > 0.0 && h0 < kPi)) throw PreconditionError("catenoid_sweep: catenoid height must be in (0, pi)");
    const double half = 0.5 * h0;
    if (half >= height_limit(d).value)
        throw PreconditionError("catenoid_sweep: h0/2 exceeds the catenoid's asymptotic height");
    // radius at which the slice reaches half-height h0/2
    double lo = d.girth_radius(), hi = lo + 1.0;
    while (lambda(d, hi).value < half) hi += 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (lambda(d, mid).value < half ? lo : hi) = mid;
    }
    const double rho_s = 0.5 * (lo + hi);
    CatenoidProfile profile(d, rho_s + 1e-9, 400);
    SurfaceMesh slice = catenoid_slice_mesh(profile, rho_s, 20, 40);
    const double eps = mean_edge_length(slice) / 10.0;

    SweepReport rep;
    rep.t_grid = t_grid;
    rep.intersects.assign(t_grid.size(), false);
    parallel_for(static_cast<int>(t_grid.size()), [&](int i) {
        const Isometry psi = Isometry::hyperbolic_dilation(t_grid[i], 0.0, kPi);
        const SurfaceMesh moved = apply_isometry(psi, slice);
        rep.intersects[i] = meshes_intersect(moved, target, eps);
    });
    int last_hit = -1;
    for (size_t i = 0; i < rep.intersects.size(); ++i) {
        if (rep.intersects[i]) {
            if (rep.first_hit < 0) rep.first_hit = static_cast<int>(i);
            last_hit = static_cast<int>(i);
        }
    }
    if (rep.first_hit >= 0) {
        for (int i = rep.first_hit; i <= last_hit; ++i)
            if (!rep.intersects[i]) rep.contiguous = false;
    }
    return rep;
}

namespace {

bool curve_touches_meridians(const RectilinearCurve& c, double thl, double thr) {
    for (const CurveEdge& e : c.edges())
        if (!e.horizontal && (std::abs(wrap_angle(e.theta0 - thl)) < 1e-9 || std::abs(wrap_angle(e.theta0 - thr)) < 1e-9))
            return true;
    return false;
}

} // namespace

BridgeReport bridge_solve(const BoundaryCurveFamily& family, double theta_b, double t0, double t1,
                          double thickness, double n, const SolverConfig& cfg, int rings,
                          int segments_per_unit) {
    BridgeReport rep;
    rep.bridged = cut_vertical_slot(family, theta_b, t0, t1, thickness);
    if (classify(rep.bridged).cls != TallnessClass::Tall)
        throw PreconditionError("bridge_solve: bridged curve is not tall");
    rep.components_before = static_cast<int>(family.components().size());
    rep.components_after = static_cast<int>(rep.bridged.components().size());

    const double C = std::max({std::abs(family.t_min()), std::abs(family.t_max()),
                               std::abs(rep.bridged.t_min()), std::abs(rep.bridged.t_max())}) + 1.0;

    rep.mesh_before = minimize(cone_disks_seed(family, n, C, rings, segments_per_unit), cfg);
    rep.sig_before = mesh_signature(rep.mesh_before);

    if (rep.components_after == rep.components_before + 1) {
        // same-component bridge: the two offspring loops span an annulus
        const double thl = wrap_angle(theta_b - 0.5 * thickness);
        const double thr = wrap_angle(theta_b + 0.5 * thickness);
        std::vector<int> offspring;
        for (int i = 0; i < rep.components_after; ++i)
            if (curve_touches_meridians(rep.bridged.components()[i], thl, thr)) offspring.push_back(i);
        if (offspring.size() != 2) throw NumericalError("bridge_solve: could not identify the split loops");
        const auto loops = radial_project(rep.bridged, n, C);
        const double ext = loop_theta_extent(rep.bridged.components()[offspring[0]]) +
                           loop_theta_extent(rep.bridged.components()[offspring[1]]);
        const int segments = std::clamp(static_cast<int>(segments_per_unit * ext), 24, 256);
        SurfaceMesh seed = annulus_seed(loops[offspring[0]], loops[offspring[1]], rings, segments);
        for (int i = 0; i < rep.components_after; ++i) {
            if (i == offspring[0] || i == offspring[1]) continue;
            const int segs = std::clamp(
                static_cast<int>(segments_per_unit * loop_theta_extent(rep.bridged.components()[i])), 16, 256);
            append_mesh(seed, cone_disk_seed(loops[i], rings, segs));
        }
        rep.mesh_after = minimize(std::move(seed), cfg);
    } else {
        rep.mesh_after = minimize(cone_disks_seed(rep.bridged, n, C, rings, segments_per_unit), cfg);
    }
    rep.sig_after = mesh_signature(rep.mesh_after);

    const int dchi = rep.sig_after.chi - rep.sig_before.chi;
    const int dloops = rep.sig_after.boundary_loops - rep.sig_before.boundary_loops;
    const int dcomp = rep.components_after - rep.components_before;
    rep.matches_prediction = (dchi == -1) && (dloops == dcomp) && (std::abs(dcomp) == 1);
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem 5.2 scenario

namespace {

// lookup raster for a graph-type barrier mesh: radius as a function of the
// (theta, t) footprint
class BarrierGraph {
public:
    BarrierGraph(const SurfaceMesh& mesh, const CylRect& rect, int res = 72) : rect_(rect), res_(res) {
        values_.assign((res + 1) * (res + 1), -1.0);
        struct Flat {
            double th, t, rho;
        };
        std::vector<std::array<Flat, 3>> tris;
        tris.reserve(mesh.triangles.size());
        for (const auto& tri : mesh.triangles) {
            std::array<Flat, 3> f;
            for (int k = 0; k < 3; ++k) {
                const PolarPoint pp = base_polar(mesh.vertices[tri[k]]);
                // unwrap against the rectangle's start
                double off = wrap_angle(pp.theta - rect.theta_lo);
                if (off > rect.theta_span() + 0.5) off -= kTwoPi;
                f[k] = {rect.theta_lo + off, mesh.vertices[tri[k]].z, pp.rho};
            }
            tris.push_back(f);
        }
        for (int j = 0; j <= res; ++j) {
            for (int i = 0; i <= res; ++i) {
                const double th = rect.theta_lo + rect.theta_span() * i / res;
                const double t = rect.t_lo + rect.height() * j / res;
                double& slot = values_[j * (res + 1) + i];
                for (const auto& f : tris) {
                    const double d1 = (f[1].th - f[0].th) * (t - f[0].t) - (f[1].t - f[0].t) * (th - f[0].th);
                    const double d2 = (f[2].th - f[1].th) * (t - f[1].t) - (f[2].t - f[1].t) * (th - f[1].th);
                    const double d3 = (f[0].th - f[2].th) * (t - f[2].t) - (f[0].t - f[2].t) * (th - f[2].th);
                    const bool neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
                    const bool pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
                    if (neg && pos) continue;
                    // barycentric interpolation of rho
                    const double det = (f[1].t - f[2].t) * (f[0].th - f[2].th) + (f[2].th - f[1].th) * (f[0].t - f[2].t);
                    if (std::abs(det) < 1e-14) continue;
                    const double l1 = ((f[1].t - f[2].t) * (th - f[2].th) + (f[2].th - f[1].th) * (t - f[2].t)) / det;
                    const double l2 = ((f[2].t - f[0].t) * (th - f[2].th) + (f[0].th - f[2].th) * (t - f[2].t)) / det;
                    const double l3 = 1.0 - l1 - l2;
                    slot = l1 * f[0].rho + l2 * f[1].rho + l3 * f[2].rho;
                    break;
                }
            }
        }
        // fill raster holes from neighbors
        for (int pass = 0; pass < res; ++pass) {
            bool missing = false;
            for (int j = 0; j <= res; ++j) {
                for (int i = 0; i <= res; ++i) {
                    double& slot = values_[j * (res + 1) + i];
                    if (slot >= 0.0) continue;
                    double acc = 0.0;
                    int cnt = 0;
                    auto probe = [&](int ii, int jj) {
                        if (ii < 0 || jj < 0 || ii > res || jj > res) return;
                        const double v = values_[jj * (res + 1) + ii];
                        if (v >= 0.0) {
                            acc += v;
                            ++cnt;
                        }
                    };
                    probe(i - 1, j);
                    probe(i + 1, j);
                    probe(i, j - 1);
                    probe(i, j + 1);
                    if (cnt > 0)
                        slot = acc / cnt;
                    else
                        missing = true;
                }
            }
            if (!missing) break;
        }
    }

    // true if the point lies strictly past the barrier toward its ideal
    // rectangle
    bool beyond(const ProductPoint& p) const {
        const PolarPoint pp = base_polar(p);
        double off = wrap_angle(pp.theta - rect_.theta_lo);
        if (off > rect_.theta_span()) return false;
        if (p.z < rect_.t_lo || p.z > rect_.t_hi) return false;
        const double fi = off / rect_.theta_span() * res_;
        const double fj = (p.z - rect_.t_lo) / rect_.height() * res_;
        const int i = std::clamp(static_cast<int>(fi), 0, res_ - 1);
        const int j = std::clamp(static_cast<int>(fj), 0, res_ - 1);
        const double wi = fi - i, wj = fj - j;
        auto at = [&](int ii, int jj) { return values_[jj * (res_ + 1) + ii]; };
        const double g = (1 - wi) * (1 - wj) * at(i, j) + wi * (1 - wj) * at(i + 1, j) +
                         (1 - wi) * wj * at(i, j + 1) + wi * wj * at(i + 1, j + 1);
        return pp.rho > g;
    }

private:
    CylRect rect_;
    int res_;
    std::vector<double> values_;
};

} // namespace

MinExistScenario minexist_scenario(double h0, double s, double t_dilation, double n, const SolverConfig& cfg,
                                   int res) {
    if (!(h0 > 0.0 && h0 < kPi))
        throw PreconditionError("minexist_scenario: requires 0 < h0 < pi (the parabolic case is out of scope)");
    if (!(s > 0.0 && s < 0.4 * kPi) || !(t_dilation > 0.0))
        throw PreconditionError("minexist_scenario: bad s or t");

    MinExistScenario out;
    // boundary curve (R+ union R-) symmetric-difference dQ, height exactly h0
    std::vector<BoundaryPoint> v = {
        {kPi / 2, -10.0}, {kPi / 2, 10.0}, {s, 10.0},   {s, h0},    {-s, h0},    {-s, 10.0},
        {-kPi / 2, 10.0}, {-kPi / 2, -10.0}, {-s, -10.0}, {-s, 0.0}, {s, 0.0},   {s, -10.0},
    };
    out.curve = BoundaryCurveFamily({RectilinearCurve(std::move(v))});

    const CylRect rplus{s, kPi / 2, -10.0, 10.0};
    const CylRect rminus{wrap_angle(-kPi / 2), wrap_angle(-s), -10.0, 10.0};

    // rectangle-graph barriers
    SolverConfig bcfg = cfg;
    const int res_t = std::max(8, static_cast<int>(res * 1.5));
    SurfaceMesh pplus = minimize(rect_graph_seed(rplus, n, res, res_t), bcfg);
    SurfaceMesh pminus = minimize(rect_graph_seed(rminus, n, res, res_t), bcfg);
    BarrierGraph gplus(pplus, rplus);
    BarrierGraph gminus(pminus, rminus);

    // catenoid with asymptotic half-height h0/2, shifted to span [0, h0],
    // dilated toward theta = 0
    double dlo = 1e-3, dhi = 1e6;
    while (dhi / dlo > 1.0 + 1e-12) {
        const double mid = std::sqrt(dlo * dhi);
        (height_limit(CatenoidParam(mid)).value < 0.5 * h0 ? dlo : dhi) = mid;
    }
    const CatenoidParam dcat(std::sqrt(dlo * dhi));
    const double reach = n + std::abs(std::log(t_dilation)) + 2.0;
    CatenoidProfile profile(dcat, dcat.girth_radius() + std::max(reach, 10.0), 1024);
    const Isometry shift = Isometry::vertical_translation(0.5 * h0);
    const Isometry dil = Isometry::hyperbolic_dilation(t_dilation, 0.0, kPi);
    const Isometry place = dil.compose(shift);
    const Isometry place_inv = place.inverse();

    auto in_tunnel = [&](const ProductPoint& p) {
        const ProductPoint q = place_inv.apply(p);
        if (std::abs(q.z) >= 0.5 * h0) return false;
        const PolarPoint pp = base_polar(q);
        return pp.rho < profile.rho_at_lambda(std::abs(q.z));
    };
    RegionTest allowed = [&](const ProductPoint& p) {
        return !gplus.beyond(p) && !gminus.beyond(p) && !in_tunnel(p);
    };

    // the translated catenoid must genuinely cross both barrier graphs
    {
        const double rho_cross = profile.rho_at_lambda(0.45 * h0);
        SurfaceMesh cat = apply_isometry(place, catenoid_slice_mesh(profile, rho_cross, 16, 48));
        const double eps = mean_edge_length(cat) / 10.0;
        if (!meshes_intersect(cat, pplus, eps) || !meshes_intersect(cat, pminus, eps))
            throw PreconditionError("minexist_scenario: barriers fail to separate; use smaller s or t");
    }

    const double C = 11.0;
    auto loops = radial_project(out.curve, n, C);
    for (const ProductPoint& p : sample_loop(loops[0], 600)) {
        if (!allowed(p))
            throw PreconditionError("minexist_scenario: projected boundary violates the barriers; "
                                    "use smaller s or t");
    }

    const double extent = loop_theta_extent(out.curve.components()[0]);
    const int segments = std::clamp(static_cast<int>(10 * extent), 48, 256);
    SurfaceMesh seed = cone_disk_seed(loops[0], std::max(10, res / 2), segments);
    // make the seed feasible: walk offending vertices toward the boundary loop
    for (int i = 0; i < seed.vertex_count(); ++i) {
        if (seed.fixed[i]) continue;
        ProductPoint& p = seed.vertices[i];
        if (allowed(p)) continue;
        for (int k = 1; k <= 64; ++k) {
            const double f = static_cast<double>(k) / 64;
            ProductPoint q{p.x, p.y + f * (2.0 * std::cosh(n) - p.y), p.z};
            // pull straight toward large y (deep side of the chart) first
            if (allowed(q)) {
                p = q;
                break;
            }
            q = ProductPoint{p.x, p.y, p.z > 0.5 * h0 ? p.z + f * (10.5 - p.z) : p.z - f * (10.5 + p.z)};
            if (allowed(q)) {
                p = q;
                break;
            }
        }
    }

    SolveStats st;
    out.constrained = minimize(std::move(seed), cfg, &allowed, &st);
    out.constrained_stats = st;
    out.touches_barriers = st.constrained_vertices > 0;
    out.constrained_area = st.area;

    const TruncatedDomain probe{std::min(2.0, n - 1.0), -C, C};
    for (const ProductPoint& p : out.constrained.vertices)
        if (probe.contains(p)) ++out.probe_occupancy_before;

    SolveStats released_stats;
    SurfaceMesh released;
    try {
        released = minimize(out.constrained, cfg, nullptr, &released_stats);
    } catch (const NonConvergence& nc) {
        released = nc.best_iterate;
        released_stats = nc.stats;
    }
    out.released_area = released_stats.area;
    for (const ProductPoint& p : released.vertices)
        if (probe.contains(p)) ++out.probe_occupancy_after;

    const bool area_drop = out.released_area < out.constrained_area - 1e-6 * std::max(1.0, out.constrained_area);
    const bool escaped = out.probe_occupancy_before > 0 && out.probe_occupancy_after == 0;
    out.evidences_non_minimizing = area_drop || escaped;
    return out;
}

} // namespace hxr
