#include "lipkin/hull_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace lipkin::hull {

double Vec3::norm() const { return std::sqrt(dot(*this)); }

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) return {0.0, 0.0, 0.0};
    return {x / n, y / n, z / n};
}

Vec3 coord_axis(Coord c) {
    switch (c) {
        case Coord::Jz: return {1.0, 0.0, 0.0};
        case Coord::Jz2: return {0.0, 1.0, 0.0};
        case Coord::Jpm2: return {0.0, 0.0, 1.0};
    }
    return {1.0, 0.0, 0.0};
}

double Hull3::signed_distance(const Vec3& p) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& f : facets) worst = std::max(worst, f.normal.dot(p) - f.offset);
    return worst;
}

bool Hull3::contains(const Vec3& p, double tol) const { return signed_distance(p) <= tol; }

double Hull3::volume() const {
    // divergence theorem over the outward-oriented facet fans
    double six_v = 0.0;
    for (const auto& f : facets) {
        for (std::size_t i = 1; i + 1 < f.loop.size(); ++i) {
            const Vec3& a = points[f.loop[0]];
            const Vec3& b = points[f.loop[i]];
            const Vec3& c = points[f.loop[i + 1]];
            six_v += a.dot(b.cross(c));
        }
    }
    return six_v / 6.0;
}

int Hull3::edge_count() const {
    std::size_t half_edges = 0;
    for (const auto& f : facets) half_edges += f.loop.size();
    return static_cast<int>(half_edges / 2);
}

int Hull3::euler_characteristic() const {
    std::set<int> verts;
    for (const auto& f : facets) verts.insert(f.loop.begin(), f.loop.end());
    return static_cast<int>(verts.size()) - edge_count() + static_cast<int>(facets.size());
}

void Hull3::check_invariants() const {
    if (euler_characteristic() != 2) throw std::runtime_error("Hull3: Euler characteristic != 2");
    Vec3 centroid{0, 0, 0};
    for (int v : vertex_ids) centroid = centroid + points[v];
    centroid = centroid * (1.0 / static_cast<double>(vertex_ids.size()));
    for (const auto& f : facets) {
        if (f.normal.dot(centroid) - f.offset >= 0.0)
            throw std::runtime_error("Hull3: facet normal not outward");
    }
    for (const auto& p : points) {
        if (!contains(p, eps)) throw std::runtime_error("Hull3: input point outside hull");
    }
}

namespace {

struct Face {
    std::array<int, 3> v{};
    std::array<int, 3> neighbor{-1, -1, -1};  // across edge (v[i], v[(i+1)%3])
    Vec3 normal;
    double offset = 0.0;
    std::vector<int> outside;
    bool alive = true;
};

Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    return (b - a).cross(c - a);
}

struct Builder {
    std::span<const Vec3> pts;
    double eps;
    std::vector<Face> faces;
    Vec3 interior{0, 0, 0};

    double dist(int f, int p) const { return faces[f].normal.dot(pts[p]) - faces[f].offset; }

    int make_face(int a, int b, int c) {
        Face f;
        f.v = {a, b, c};
        Vec3 n = triangle_normal(pts[a], pts[b], pts[c]);
        const double len = n.norm();
        if (len > 0.0) n = n * (1.0 / len);
        const Vec3 centroid = (pts[a] + pts[b] + pts[c]) * (1.0 / 3.0);
        if (n.dot(centroid) - n.dot(interior) < 0.0) {
            std::swap(f.v[1], f.v[2]);
            n = n * -1.0;
        }
        f.normal = n;
        f.offset = n.dot((pts[f.v[0]] + pts[f.v[1]] + pts[f.v[2]]) * (1.0 / 3.0));
        faces.push_back(std::move(f));
        return static_cast<int>(faces.size()) - 1;
    }

    int edge_index(int f, int a, int b) const {
        for (int i = 0; i < 3; ++i) {
            if (faces[f].v[i] == a && faces[f].v[(i + 1) % 3] == b) return i;
        }
        return -1;
    }

    void link(int fa, int a, int b, int fb) {
        const int ia = edge_index(fa, a, b);
        const int ib = edge_index(fb, b, a);
        if (ia < 0 || ib < 0) throw std::logic_error("quickhull: broken adjacency");
        faces[fa].neighbor[ia] = fb;
        faces[fb].neighbor[ib] = fa;
    }
};

}  // namespace

Hull3 quickhull3(std::span<const Vec3> points, const HullOptions& opts) {
    const std::size_t n = points.size();
    if (n < 4) throw DegeneracyError(n > 1 ? 1 : 0, "quickhull3: need at least 4 points");
    const double eps = opts.eps;

    // initial extremes: the most distant axis-extreme pair
    int p0 = 0, p1 = 0;
    {
        std::array<int, 6> ext{};
        ext.fill(0);
        for (std::size_t i = 1; i < n; ++i) {
            const Vec3& p = points[i];
            if (p.x < points[ext[0]].x) ext[0] = static_cast<int>(i);
            if (p.x > points[ext[1]].x) ext[1] = static_cast<int>(i);
            if (p.y < points[ext[2]].y) ext[2] = static_cast<int>(i);
            if (p.y > points[ext[3]].y) ext[3] = static_cast<int>(i);
            if (p.z < points[ext[4]].z) ext[4] = static_cast<int>(i);
            if (p.z > points[ext[5]].z) ext[5] = static_cast<int>(i);
        }
        double best = -1.0;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                const double d = (points[ext[i]] - points[ext[j]]).norm();
                if (d > best) {
                    best = d;
                    p0 = std::min(ext[i], ext[j]);
                    p1 = std::max(ext[i], ext[j]);
                }
            }
        if (best <= eps) throw DegeneracyError(0, "quickhull3: all points coincide within eps");
    }

    // farthest from the p0-p1 line
    int p2 = -1;
    {
        const Vec3 d = (points[p1] - points[p0]).normalized();
        double best = eps;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 r = points[i] - points[p0];
            const double dist = (r - d * r.dot(d)).norm();
            if (dist > best) {
                best = dist;
                p2 = static_cast<int>(i);
            }
        }
        if (p2 < 0) throw DegeneracyError(1, "quickhull3: points are collinear within eps");
    }

    // farthest from the p0-p1-p2 plane
    int p3 = -1;
    {
        const Vec3 nrm = triangle_normal(points[p0], points[p1], points[p2]).normalized();
        double best = eps;
        for (std::size_t i = 0; i < n; ++i) {
            const double dist = std::abs(nrm.dot(points[i] - points[p0]));
            if (dist > best) {
                best = dist;
                p3 = static_cast<int>(i);
            }
        }
        if (p3 < 0) throw DegeneracyError(2, "quickhull3: points are coplanar within eps");
    }

    Builder bld{points, eps, {}, (points[p0] + points[p1] + points[p2] + points[p3]) * 0.25};

    const int f0 = bld.make_face(p0, p1, p2);
    const int f1 = bld.make_face(p0, p1, p3);
    const int f2 = bld.make_face(p0, p2, p3);
    const int f3 = bld.make_face(p1, p2, p3);
    for (int fa : {f0, f1, f2, f3})
        for (int fb : {f0, f1, f2, f3}) {
            if (fa >= fb) continue;
            // shared edge, if any
            for (int i = 0; i < 3; ++i) {
                const int a = bld.faces[fa].v[i], b = bld.faces[fa].v[(i + 1) % 3];
                if (bld.edge_index(fb, b, a) >= 0) bld.link(fa, a, b, fb);
            }
        }

    // distribute points
    std::deque<int> pending;
    for (std::size_t i = 0; i < n; ++i) {
        const int ip = static_cast<int>(i);
        if (ip == p0 || ip == p1 || ip == p2 || ip == p3) continue;
        for (int f : {f0, f1, f2, f3}) {
            if (bld.dist(f, ip) > eps) {
                bld.faces[f].outside.push_back(ip);
                break;
            }
        }
    }
    for (int f : {f0, f1, f2, f3})
        if (!bld.faces[f].outside.empty()) pending.push_back(f);

    while (!pending.empty()) {
        const int fid = pending.front();
        pending.pop_front();
        if (!bld.faces[fid].alive || bld.faces[fid].outside.empty()) continue;

        // farthest outside point, ties to the lowest index
        int apex = -1;
        double best = -1.0;
        for (int p : bld.faces[fid].outside) {
            const double d = bld.dist(fid, p);
            if (d > best || (d == best && p < apex)) {
                best = d;
                apex = p;
            }
        }

        // grow the visible region from fid
        std::vector<int> visible{fid};
        std::set<int> seen{fid};
        std::vector<std::array<int, 3>> horizon;  // (a, b, hidden face) with a->b on a visible face
        std::deque<int> stack{fid};
        while (!stack.empty()) {
            const int f = stack.front();
            stack.pop_front();
            for (int i = 0; i < 3; ++i) {
                const int nb = bld.faces[f].neighbor[i];
                if (nb < 0) throw std::logic_error("quickhull: open surface");
                const int a = bld.faces[f].v[i], b = bld.faces[f].v[(i + 1) % 3];
                if (bld.dist(nb, apex) > eps) {
                    if (!seen.count(nb)) {
                        seen.insert(nb);
                        visible.push_back(nb);
                        stack.push_back(nb);
                    }
                } else {
                    horizon.push_back({a, b, nb});
                }
            }
        }

        // chain horizon edges into a loop
        std::map<int, std::size_t> next_of;
        for (std::size_t i = 0; i < horizon.size(); ++i) next_of[horizon[i][0]] = i;
        std::vector<std::array<int, 3>> loop;
        loop.reserve(horizon.size());
        int start = horizon[0][0];
        int cur = start;
        for (std::size_t k = 0; k < horizon.size(); ++k) {
            const auto it = next_of.find(cur);
            if (it == next_of.end()) throw std::logic_error("quickhull: broken horizon");
            loop.push_back(horizon[it->second]);
            cur = horizon[it->second][1];
        }
        if (cur != start) throw std::logic_error("quickhull: horizon not closed");

        // collect orphaned outside points
        std::vector<int> orphans;
        for (int f : visible) {
            bld.faces[f].alive = false;
            for (int p : bld.faces[f].outside)
                if (p != apex) orphans.push_back(p);
            bld.faces[f].outside.clear();
        }
        std::sort(orphans.begin(), orphans.end());
        orphans.erase(std::unique(orphans.begin(), orphans.end()), orphans.end());

        // build the new cone
        std::vector<int> cone;
        cone.reserve(loop.size());
        for (const auto& e : loop) cone.push_back(bld.make_face(e[0], e[1], apex));
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const auto& e = loop[i];
            bld.link(cone[i], e[0], e[1], e[2]);  // outer edge to the hidden face
            const std::size_t j = (i + 1) % loop.size();
            bld.link(cone[i], e[1], apex, cone[j]);
        }
        for (int p : orphans) {
            for (int f : cone) {
                if (bld.dist(f, p) > eps) {
                    bld.faces[f].outside.push_back(p);
                    break;
                }
            }
        }
        for (int f : cone)
            if (!bld.faces[f].outside.empty()) pending.push_back(f);
    }

    // compact live triangles
    Hull3 hull;
    hull.eps = eps;
    hull.points.assign(points.begin(), points.end());
    std::vector<int> live;
    for (std::size_t f = 0; f < bld.faces.size(); ++f)
        if (bld.faces[f].alive) live.push_back(static_cast<int>(f));
    std::set<int> vset;
    for (int f : live) {
        hull.triangles.push_back(bld.faces[f].v);
        vset.insert(bld.faces[f].v.begin(), bld.faces[f].v.end());
    }
    hull.vertex_ids.assign(vset.begin(), vset.end());

    // ---- merge coplanar triangles into facets ----
    std::map<int, int> live_pos;
    for (std::size_t i = 0; i < live.size(); ++i) live_pos[live[i]] = static_cast<int>(i);

    const double cos_tol = std::cos(opts.merge_angle_tol);
    std::vector<int> group_of(live.size(), -1);
    int n_groups = 0;
    for (std::size_t i = 0; i < live.size(); ++i) {
        if (group_of[i] >= 0) continue;
        const int g = n_groups++;
        const Vec3 seed_n = bld.faces[live[i]].normal;
        std::deque<int> q{static_cast<int>(i)};
        group_of[i] = g;
        while (!q.empty()) {
            const int t = q.front();
            q.pop_front();
            for (int e = 0; e < 3; ++e) {
                const int nb = bld.faces[live[t]].neighbor[e];
                const auto it = live_pos.find(nb);
                if (it == live_pos.end()) continue;
                const int tn = it->second;
                if (group_of[tn] >= 0) continue;
                if (bld.faces[nb].normal.dot(seed_n) >= cos_tol) {
                    group_of[tn] = g;
                    q.push_back(tn);
                }
            }
        }
    }

    for (int g = 0; g < n_groups; ++g) {
        std::vector<int> tris;
        for (std::size_t i = 0; i < live.size(); ++i)
            if (group_of[i] == g) tris.push_back(static_cast<int>(i));

        // area-weighted plane of the group
        Vec3 nsum{0, 0, 0}, csum{0, 0, 0};
        double asum = 0.0;
        for (int t : tris) {
            const auto& v = hull.triangles[t];
            const Vec3 tn = triangle_normal(hull.points[v[0]], hull.points[v[1]], hull.points[v[2]]);
            const double area = 0.5 * tn.norm();
            nsum = nsum + tn * 0.5;
            csum = csum + (hull.points[v[0]] + hull.points[v[1]] + hull.points[v[2]]) *
                              (area / 3.0);
            asum += area;
        }
        Facet facet;
        facet.normal = nsum.normalized();
        facet.offset = asum > 0.0 ? facet.normal.dot(csum * (1.0 / asum))
                                  : facet.normal.dot(hull.points[hull.triangles[tris[0]][0]]);

        // boundary half-edges: edges not shared by two triangles of the group
        std::set<std::pair<int, int>> edges;
        for (int t : tris) {
            const auto& v = hull.triangles[t];
            for (int e = 0; e < 3; ++e) {
                const int a = v[e], b = v[(e + 1) % 3];
                if (edges.count({b, a})) edges.erase({b, a});
                else edges.insert({a, b});
            }
        }
        std::map<int, int> nxt;
        for (const auto& [a, b] : edges) nxt[a] = b;
        if (nxt.empty()) continue;
        std::vector<int> loop;
        const int start = nxt.begin()->first;
        int cur = start;
        do {
            loop.push_back(cur);
            const auto it = nxt.find(cur);
            if (it == nxt.end()) throw std::logic_error("facet merge: open boundary");
            cur = it->second;
        } while (cur != start && loop.size() <= nxt.size());
        if (cur != start) throw std::logic_error("facet merge: boundary does not close");

        // drop vertices within eps of the chord through their neighbours
        if (loop.size() > 3) {
            std::vector<int> cleaned;
            const std::size_t m = loop.size();
            for (std::size_t i = 0; i < m; ++i) {
                const Vec3& prev = hull.points[loop[(i + m - 1) % m]];
                const Vec3& cur_p = hull.points[loop[i]];
                const Vec3& next = hull.points[loop[(i + 1) % m]];
                const Vec3 d = (next - prev);
                const double len = d.norm();
                double off = (cur_p - prev).cross(d * (len > 0 ? 1.0 / len : 0.0)).norm();
                if (off > eps || cleaned.size() + (m - i) <= 3) cleaned.push_back(loop[i]);
            }
            if (cleaned.size() >= 3) loop = std::move(cleaned);
        }
        facet.loop = std::move(loop);
        hull.facets.push_back(std::move(facet));
    }

    return hull;
}

RuledSurfaceReport detect_ruled_surfaces(const Hull3& hull, Coord axis, double angle_tol,
                                         int min_lines, std::span<const Segment> candidates) {
    const Vec3 ax = coord_axis(axis);
    RuledSurfaceReport report;
    report.axis = axis;
    report.interpretation = axis == Coord::Jz ? "spin_flip" : (axis == Coord::Jpm2 ? "parity" : "");

    std::vector<int> aligned;
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
        if (std::abs(hull.facets[f].normal.dot(ax)) <= angle_tol)
            aligned.push_back(static_cast<int>(f));
    }

    std::set<std::pair<int, int>> distinct;
    std::set<int> used_facets;
    for (const auto& seg : candidates) {
        const Vec3& a = hull.points[seg.a];
        const Vec3& b = hull.points[seg.b];
        const Vec3 d = b - a;
        const double len = d.norm();
        if (len <= hull.eps) continue;
        if (d.cross(ax).norm() > angle_tol * len) continue;  // not parallel to the axis
        for (int f : aligned) {
            const Facet& facet = hull.facets[f];
            if (std::abs(facet.normal.dot(a) - facet.offset) <= hull.eps &&
                std::abs(facet.normal.dot(b) - facet.offset) <= hull.eps) {
                const auto key = std::minmax(seg.a, seg.b);
                if (distinct.insert({key.first, key.second}).second)
                    report.segments.push_back(seg);
                used_facets.insert(f);
                break;
            }
        }
    }
    if (static_cast<int>(report.segments.size()) < min_lines) {
        // below the reporting threshold: an empty report
        report.segments.clear();
        return report;
    }
    report.facet_ids.assign(used_facets.begin(), used_facets.end());
    return report;
}

std::vector<int> detect_first_order_plane(const Hull3& hull, Coord normal_axis, double angle_tol) {
    const Vec3 ax = coord_axis(normal_axis);
    std::vector<int> out;
    for (std::size_t f = 0; f < hull.facets.size(); ++f) {
        const Facet& facet = hull.facets[f];
        if (facet.normal.cross(ax).norm() <= angle_tol && facet.loop.size() >= 4)
            out.push_back(static_cast<int>(f));
    }
    return out;
}

namespace {

std::array<double, 2> project_point(const Vec3& p, Coord drop) {
    switch (drop) {
        case Coord::Jz: return {p.y, p.z};
        case Coord::Jz2: return {p.x, p.z};
        case Coord::Jpm2: return {p.x, p.y};
    }
    return {p.x, p.z};
}

double cross2(const std::array<double, 2>& o, const std::array<double, 2>& a,
              const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

Projection project_to_plane(std::span<const Vec3> points, Coord drop_axis, double eps) {
    if (points.empty()) throw std::invalid_argument("project_to_plane: no points");
    Projection proj;
    proj.points.reserve(points.size());
    for (const auto& p : points) proj.points.push_back(project_point(p, drop_axis));

    if (points.size() == 1) {
        proj.outline = {0};
        return proj;
    }

    // monotone chain; vertices within eps of the hull boundary are dropped
    std::vector<int> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (proj.points[a][0] != proj.points[b][0]) return proj.points[a][0] < proj.points[b][0];
        if (proj.points[a][1] != proj.points[b][1]) return proj.points[a][1] < proj.points[b][1];
        return a < b;
    });
    auto extend = [&](std::vector<int>& chain, int id) {
        while (chain.size() >= 2) {
            const auto& o = proj.points[chain[chain.size() - 2]];
            const auto& a = proj.points[chain.back()];
            const auto& b = proj.points[id];
            if (cross2(o, a, b) > eps) break;  // strict left turn survives
            chain.pop_back();
        }
        chain.push_back(id);
    };
    std::vector<int> lower, upper;
    for (int id : idx) extend(lower, id);
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) extend(upper, *it);
    if (lower.size() <= 2) {
        proj.outline = lower;
        return proj;
    }
    lower.pop_back();
    upper.pop_back();
    proj.outline = std::move(lower);
    proj.outline.insert(proj.outline.end(), upper.begin(), upper.end());
    return proj;
}

TrajectoryAnalysis trajectory_analysis(std::span<const Vec3> points,
                                       std::span<const double> lambdas,
                                       const TrajectoryOptions& opts) {
    if (points.size() != lambdas.size())
        throw std::invalid_argument("trajectory_analysis: size mismatch");
    if (points.size() < 3) throw std::invalid_argument("trajectory_analysis: need >= 3 points");
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (lambdas[i] <= lambdas[i - 1]) increasing = false;
        if (lambdas[i] >= lambdas[i - 1]) decreasing = false;
    }
    if (!increasing && !decreasing)
        throw std::invalid_argument("trajectory_analysis: lambda grid not strictly monotone");

    std::vector<Vec3> pts(points.begin(), points.end());
    std::vector<double> lam(lambdas.begin(), lambdas.end());
    if (decreasing) {
        std::reverse(pts.begin(), pts.end());
        std::reverse(lam.begin(), lam.end());
    }
    const std::size_t m = pts.size();

    TrajectoryAnalysis out;
    out.lambdas = lam;

    if (opts.smoothing_sigma && *opts.smoothing_sigma > 0.0) {
        const double sigma = *opts.smoothing_sigma;
        const int half = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
        std::vector<Vec3> smooth(m);
        for (std::size_t i = 0; i < m; ++i) {
            Vec3 acc{0, 0, 0};
            double wsum = 0.0;
            for (int k = -half; k <= half; ++k) {
                const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + k;
                if (j < 0 || j >= static_cast<std::ptrdiff_t>(m)) continue;
                const double w = std::exp(-0.5 * (k / sigma) * (k / sigma));
                acc = acc + pts[j] * w;
                wsum += w;
            }
            smooth[i] = acc * (1.0 / wsum);
        }
        pts = std::move(smooth);
        out.smoothed = true;
        out.smoothing_sigma = sigma;
    }

    out.arc_speed.resize(m);
    out.djz_dlambda.resize(m);
    auto deriv = [&](std::size_t lo, std::size_t hi) {
        const double dl = lam[hi] - lam[lo];
        return (pts[hi] - pts[lo]) * (1.0 / dl);
    };
    for (std::size_t i = 0; i < m; ++i) {
        const Vec3 d = i == 0 ? deriv(0, 1) : (i + 1 == m ? deriv(m - 2, m - 1) : deriv(i - 1, i + 1));
        out.arc_speed[i] = d.norm();
        out.djz_dlambda[i] = d.x;
    }

    std::size_t arg = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (out.djz_dlambda[i] > out.djz_dlambda[arg]) arg = i;
    out.peak_lambda = lam[arg];
    out.peak_value = out.djz_dlambda[arg];

    // FWHM of the peak, linear interpolation on either side
    const double half_max = 0.5 * out.peak_value;
    double left = lam.front(), right = lam.back();
    for (std::size_t i = arg; i > 0; --i) {
        if (out.djz_dlambda[i - 1] < half_max) {
            const double t = (half_max - out.djz_dlambda[i - 1]) /
                             (out.djz_dlambda[i] - out.djz_dlambda[i - 1]);
            left = lam[i - 1] + t * (lam[i] - lam[i - 1]);
            break;
        }
    }
    for (std::size_t i = arg; i + 1 < m; ++i) {
        if (out.djz_dlambda[i + 1] < half_max) {
            const double t = (out.djz_dlambda[i] - half_max) /
                             (out.djz_dlambda[i] - out.djz_dlambda[i + 1]);
            right = lam[i] + t * (lam[i + 1] - lam[i]);
            break;
        }
    }
    out.peak_width = right - left;

    // secant-ratio discontinuity flags
    std::vector<double> secants(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
        secants[i] = (pts[i + 1].x - pts[i].x) / (lam[i + 1] - lam[i]);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double a = std::abs(secants[i - 1]), b = std::abs(secants[i]);
        const double hi = std::max(a, b), lo = std::min(a, b);
        if (hi > opts.jump_factor * std::max(lo, 1e-300) && hi > 1e-12)
            out.discontinuities.push_back(static_cast<int>(i));
    }
    return out;
}

std::string to_obj(const Hull3& hull, std::span<const int> ruled_jz_facets,
                   std::span<const int> ruled_jpm2_facets, std::span<const int> plane_facets) {
    std::set<int> jz(ruled_jz_facets.begin(), ruled_jz_facets.end());
    std::set<int> jpm2(ruled_jpm2_facets.begin(), ruled_jpm2_facets.end());
    std::set<int> plane(plane_facets.begin(), plane_facets.end());

    // only hull vertices are emitted; remap indices
    std::map<int, int> remap;
    std::string out;
    char buf[128];
    for (int v : hull.vertex_ids) {
        remap[v] = static_cast<int>(remap.size()) + 1;  // OBJ is 1-based
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", hull.points[v].x,
                      hull.points[v].y, hull.points[v].z);
        out += buf;
    }
    auto facet_line = [&](const Facet& f) {
        std::string line = "f";
        for (int v : f.loop) line += " " + std::to_string(remap.at(v));
        return line + "\n";
    };
    const std::set<int>* groups[3] = {&jz, &jpm2, &plane};
    const char* names[4] = {"ruled_jz", "ruled_jpm2", "first_order_plane", "other"};
    for (int g = 0; g < 4; ++g) {
        std::string body;
        for (std::size_t f = 0; f < hull.facets.size(); ++f) {
            const int fi = static_cast<int>(f);
            bool mine;
            if (g < 3) {
                mine = groups[g]->count(fi) > 0;
                // earlier groups take precedence
                for (int gg = 0; gg < g && mine; ++gg)
                    if (groups[gg]->count(fi)) mine = false;
            } else {
                mine = !jz.count(fi) && !jpm2.count(fi) && !plane.count(fi);
            }
            if (mine) body += facet_line(hull.facets[f]);
        }
        if (!body.empty()) {
            out += std::string("g ") + names[g] + "\n" + body;
        }
    }
    return out;
}

}  // namespace lipkin::hull
