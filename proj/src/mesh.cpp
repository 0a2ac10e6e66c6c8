#include "pfrac/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace pfrac {

namespace {

constexpr double kAlignTol = 1e-9;

bool near(double a, double b, double tol = kAlignTol) { return std::abs(a - b) <= tol; }

bool is_integer(double v) { return std::abs(v - std::round(v)) <= kAlignTol * std::max(1.0, std::abs(v)); }

std::pair<int, int> sorted_edge(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

// Undirected edges used by exactly one triangle, directed so the domain lies
// on their left (the orientation they carry inside the CCW triangle).
std::vector<std::array<int, 3>> find_boundary_edges(const Mesh& mesh) {
    std::map<std::pair<int, int>, std::pair<int, std::array<int, 2>>> use;  // edge -> (count, directed, tri)
    std::map<std::pair<int, int>, int> owner;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            auto key = sorted_edge(a, b);
            auto it = use.find(key);
            if (it == use.end()) {
                use[key] = {1, {a, b}};
                owner[key] = t;
            } else {
                ++it->second.first;
            }
        }
    }
    std::vector<std::array<int, 3>> result;  // a, b, adjacent triangle
    for (const auto& [key, entry] : use)
        if (entry.first == 1)
            result.push_back({entry.second[0], entry.second[1], owner[key]});
    return result;
}

double tri_centroid_y(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    return (mesh.nodes[tri[0]][1] + mesh.nodes[tri[1]][1] + mesh.nodes[tri[2]][1]) / 3.0;
}

// Closed-set separating-axis test between a triangle and an axis-aligned box.
bool tri_box_intersect(const std::array<double, 2>& p0, const std::array<double, 2>& p1,
                       const std::array<double, 2>& p2, const Rect& box) {
    const double tminx = std::min({p0[0], p1[0], p2[0]});
    const double tmaxx = std::max({p0[0], p1[0], p2[0]});
    const double tminy = std::min({p0[1], p1[1], p2[1]});
    const double tmaxy = std::max({p0[1], p1[1], p2[1]});
    if (tmaxx < box.x0 || tminx > box.x1 || tmaxy < box.y0 || tminy > box.y1) return false;

    const std::array<std::array<double, 2>, 3> pts = {p0, p1, p2};
    for (int e = 0; e < 3; ++e) {
        const auto& u = pts[e];
        const auto& v = pts[(e + 1) % 3];
        const double nx = -(v[1] - u[1]), ny = v[0] - u[0];
        double tmin = 1e300, tmax = -1e300;
        for (const auto& p : pts) {
            const double s = nx * p[0] + ny * p[1];
            tmin = std::min(tmin, s);
            tmax = std::max(tmax, s);
        }
        double bmin = 1e300, bmax = -1e300;
        for (double cx : {box.x0, box.x1})
            for (double cy : {box.y0, box.y1}) {
                const double s = nx * cx + ny * cy;
                bmin = std::min(bmin, s);
                bmax = std::max(bmax, s);
            }
        if (tmax < bmin || tmin > bmax) return false;
    }
    return true;
}

}  // namespace

double Mesh::signed_area(int t) const {
    const auto& tri = triangles[t];
    const auto& a = nodes[tri[0]];
    const auto& b = nodes[tri[1]];
    const auto& c = nodes[tri[2]];
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double Mesh::total_area() const {
    double s = 0.0;
    for (int t = 0; t < n_triangles(); ++t) s += signed_area(t);
    return s;
}

double Mesh::min_edge_length() const {
    double h = 1e300;
    for (const auto& tri : triangles)
        for (int e = 0; e < 3; ++e) {
            const auto& a = nodes[tri[e]];
            const auto& b = nodes[tri[(e + 1) % 3]];
            h = std::min(h, std::hypot(b[0] - a[0], b[1] - a[1]));
        }
    return h;
}

bool Mesh::has_tag(const std::string& tag) const {
    for (const auto& e : boundary_edges)
        if (e.tag == tag) return true;
    return false;
}

Mesh unit_square_slit_mesh(int n, const std::optional<SlitSpec>& slit) {
    if (n < 1) throw GeometryError("unit_square_slit_mesh: n must be >= 1");
    const double h = 1.0 / n;
    Mesh mesh;
    auto idx = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.nodes.push_back({i * h, j * h});
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int v00 = idx(i, j), v10 = idx(i + 1, j);
            const int v01 = idx(i, j + 1), v11 = idx(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    mesh.tri_level.assign(mesh.triangles.size(), 0);

    double slit_y = -1.0;
    if (slit) {
        if (!is_integer(slit->y * n) || !is_integer(slit->x0 * n) || !is_integer(slit->x1 * n))
            throw GeometryError("unit_square_slit_mesh: slit not aligned with mesh lines");
        if (slit->y <= 0.0 || slit->y >= 1.0 || slit->x0 < 0.0 || slit->x1 > 1.0 ||
            slit->x0 >= slit->x1)
            throw GeometryError("unit_square_slit_mesh: invalid slit segment");
        slit_y = slit->y;
        const int j0 = static_cast<int>(std::llround(slit->y * n));
        const int i0 = static_cast<int>(std::llround(slit->x0 * n));
        const int i1 = static_cast<int>(std::llround(slit->x1 * n));

        // Duplicate slit nodes; an endpoint interior to the domain is the
        // crack tip and stays single, an endpoint on the outer boundary is the
        // crack mouth and splits like the rest.
        std::map<int, int> dup;  // original (lower lip) -> upper-lip copy
        for (int i = i0; i <= i1; ++i) {
            const bool endpoint = (i == i0 || i == i1);
            const bool interior_endpoint = endpoint && i > 0 && i < n;
            if (interior_endpoint) continue;
            const int orig = idx(i, j0);
            dup[orig] = mesh.n_nodes();
            mesh.nodes.push_back(mesh.nodes[orig]);
        }
        for (int t = 0; t < mesh.n_triangles(); ++t) {
            if (tri_centroid_y(mesh, t) <= slit_y) continue;
            for (int k = 0; k < 3; ++k) {
                auto it = dup.find(mesh.triangles[t][k]);
                if (it != dup.end()) mesh.triangles[t][k] = it->second;
            }
        }
    }

    for (const auto& [a, b, tri] : find_boundary_edges(mesh)) {
        const double mx = 0.5 * (mesh.nodes[a][0] + mesh.nodes[b][0]);
        const double my = 0.5 * (mesh.nodes[a][1] + mesh.nodes[b][1]);
        std::string tag;
        if (near(my, 0.0))
            tag = "Bottom";
        else if (near(mx, 1.0))
            tag = "Right";
        else if (near(my, 1.0))
            tag = "Top";
        else if (near(mx, 0.0))
            tag = "Left";
        else if (slit && near(my, slit_y))
            tag = tri_centroid_y(mesh, tri) > slit_y ? "SlitUpper" : "SlitLower";
        else
            throw GeometryError("unit_square_slit_mesh: untaggable boundary edge");
        mesh.boundary_edges.push_back({a, b, tag});
    }
    return mesh;
}

Mesh lshape_mesh(double h) {
    if (h <= 0.0 || !is_integer(250.0 / h))
        throw GeometryError("lshape_mesh: h must divide 250 evenly");
    const int half = static_cast<int>(std::llround(250.0 / h));
    const int m = 2 * half;

    Mesh mesh;
    std::map<std::pair<int, int>, int> node_id;
    auto get_node = [&](int i, int j) {
        auto it = node_id.find({i, j});
        if (it != node_id.end()) return it->second;
        const int id = mesh.n_nodes();
        node_id[{i, j}] = id;
        mesh.nodes.push_back({i * h, j * h});
        return id;
    };
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            if (i >= half && j >= half) continue;  // removed quadrant
            const int v00 = get_node(i, j), v10 = get_node(i + 1, j);
            const int v01 = get_node(i, j + 1), v11 = get_node(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    mesh.tri_level.assign(mesh.triangles.size(), 0);

    for (const auto& [a, b, tri] : find_boundary_edges(mesh)) {
        (void)tri;
        const double ax = mesh.nodes[a][0], bx = mesh.nodes[b][0];
        const double mx = 0.5 * (ax + bx);
        const double my = 0.5 * (mesh.nodes[a][1] + mesh.nodes[b][1]);
        std::string tag;
        if (near(my, 0.0))
            tag = "Bottom";
        else if (near(mx, 500.0))
            tag = "Right";
        else if (near(my, 500.0))
            tag = "Top";
        else if (near(mx, 0.0))
            tag = "Left";
        else if (near(my, 250.0)) {
            const double lo = std::min(ax, bx), hi = std::max(ax, bx);
            const bool overlaps_load = std::min(hi, 500.0) - std::max(lo, 470.0) > kAlignTol;
            tag = overlaps_load ? "LoadSegment" : "InnerHorizontal";
        } else if (near(mx, 250.0))
            tag = "InnerVertical";
        else
            throw GeometryError("lshape_mesh: untaggable boundary edge");
        mesh.boundary_edges.push_back({a, b, tag});
    }
    return mesh;
}

Mesh refine_region(const Mesh& input, const Rect& box, int levels) {
    if (levels < 1) throw GeometryError("refine_region: levels must be >= 1");

    Mesh mesh = input;
    for (;;) {
        std::vector<std::uint8_t> red(mesh.n_triangles(), 0);
        bool any = false;
        for (int t = 0; t < mesh.n_triangles(); ++t) {
            if (mesh.tri_level[t] >= levels) continue;
            const auto& tri = mesh.triangles[t];
            if (tri_box_intersect(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]],
                                  box)) {
                red[t] = 1;
                any = true;
            }
        }
        if (!any) break;

        // Close the red set: any triangle acquiring two split edges is itself
        // split regularly, so greens only ever bisect across a single edge.
        std::set<std::pair<int, int>> split;
        for (int t = 0; t < mesh.n_triangles(); ++t)
            if (red[t])
                for (int e = 0; e < 3; ++e)
                    split.insert(sorted_edge(mesh.triangles[t][e], mesh.triangles[t][(e + 1) % 3]));
        for (bool changed = true; changed;) {
            changed = false;
            for (int t = 0; t < mesh.n_triangles(); ++t) {
                if (red[t]) continue;
                const auto& tri = mesh.triangles[t];
                int cnt = 0;
                for (int e = 0; e < 3; ++e)
                    cnt += split.count(sorted_edge(tri[e], tri[(e + 1) % 3])) ? 1 : 0;
                if (cnt >= 2) {
                    red[t] = 1;
                    for (int e = 0; e < 3; ++e)
                        split.insert(sorted_edge(tri[e], tri[(e + 1) % 3]));
                    changed = true;
                }
            }
        }

        Mesh next;
        next.nodes = mesh.nodes;
        std::map<std::pair<int, int>, int> midpoint;
        for (const auto& edge : split) {  // std::set order keeps this deterministic
            const auto& a = mesh.nodes[edge.first];
            const auto& b = mesh.nodes[edge.second];
            midpoint[edge] = next.n_nodes();
            next.nodes.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
        }

        for (int t = 0; t < mesh.n_triangles(); ++t) {
            const auto [a, b, c] = mesh.triangles[t];
            const int lvl = mesh.tri_level[t];
            if (red[t]) {
                const int mab = midpoint.at(sorted_edge(a, b));
                const int mbc = midpoint.at(sorted_edge(b, c));
                const int mca = midpoint.at(sorted_edge(c, a));
                for (const auto& child : {std::array<int, 3>{a, mab, mca},
                                          std::array<int, 3>{mab, b, mbc},
                                          std::array<int, 3>{mca, mbc, c},
                                          std::array<int, 3>{mab, mbc, mca}}) {
                    next.triangles.push_back(child);
                    next.tri_level.push_back(lvl + 1);
                }
                continue;
            }
            std::array<std::pair<int, int>, 3> edges = {sorted_edge(a, b), sorted_edge(b, c),
                                                        sorted_edge(c, a)};
            int split_local = -1;
            for (int e = 0; e < 3; ++e)
                if (midpoint.count(edges[e])) split_local = e;
            if (split_local < 0) {
                next.triangles.push_back({a, b, c});
                next.tri_level.push_back(lvl);
                continue;
            }
            // Green bisection through the hanging node and the opposite vertex.
            const std::array<std::array<int, 3>, 3> rot = {{{a, b, c}, {b, c, a}, {c, a, b}}};
            const auto [u, v, w] = rot[split_local];
            const int mid = midpoint.at(sorted_edge(u, v));
            next.triangles.push_back({u, mid, w});
            next.tri_level.push_back(lvl);
            next.triangles.push_back({mid, v, w});
            next.tri_level.push_back(lvl);
        }

        for (const auto& be : mesh.boundary_edges) {
            auto it = midpoint.find(sorted_edge(be.a, be.b));
            if (it == midpoint.end()) {
                next.boundary_edges.push_back(be);
            } else {
                next.boundary_edges.push_back({be.a, it->second, be.tag});
                next.boundary_edges.push_back({it->second, be.b, be.tag});
            }
        }
        mesh = std::move(next);
    }
    return mesh;
}

std::vector<int> boundary_dofs(const Mesh& mesh, const std::string& tag, DofField field) {
    std::set<int> nodes;
    bool found = false;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != tag) continue;
        found = true;
        nodes.insert(e.a);
        nodes.insert(e.b);
    }
    if (!found) throw TagError("boundary_dofs: unknown boundary tag '" + tag + "'");
    std::vector<int> dofs;
    dofs.reserve(nodes.size());
    for (int node : nodes) {
        switch (field) {
            case DofField::DisplacementX: dofs.push_back(2 * node); break;
            case DofField::DisplacementY: dofs.push_back(2 * node + 1); break;
            case DofField::Phase: dofs.push_back(node); break;
        }
    }
    return dofs;
}

void DofMap::add_displacement(int dof, double rate) {
    for (const auto& d : dirichlet_displacement) {
        if (d.dof != dof) continue;
        if (d.rate != rate)
            throw std::invalid_argument("DofMap: conflicting Dirichlet values for dof " +
                                        std::to_string(dof));
        return;
    }
    dirichlet_displacement.push_back({dof, rate});
}

void DofMap::add_phase(int dof, double value) {
    for (const auto& d : dirichlet_phase) {
        if (d.dof != dof) continue;
        if (d.value != value)
            throw std::invalid_argument("DofMap: conflicting phase Dirichlet values for dof " +
                                        std::to_string(dof));
        return;
    }
    dirichlet_phase.push_back({dof, value});
}

void DofMap::finalize(int n_nodes_in) {
    n_nodes = n_nodes_in;
    disp_constrained.assign(2 * n_nodes, 0);
    disp_rate.assign(2 * n_nodes, 0.0);
    phase_constrained.assign(n_nodes, 0);
    phase_value.assign(n_nodes, 0.0);
    for (const auto& d : dirichlet_displacement) {
        if (d.dof < 0 || d.dof >= 2 * n_nodes)
            throw std::invalid_argument("DofMap: displacement dof out of range");
        if (disp_constrained[d.dof])
            throw std::invalid_argument("DofMap: duplicate displacement constraint");
        disp_constrained[d.dof] = 1;
        disp_rate[d.dof] = d.rate;
    }
    for (const auto& d : dirichlet_phase) {
        if (d.dof < 0 || d.dof >= n_nodes)
            throw std::invalid_argument("DofMap: phase dof out of range");
        if (phase_constrained[d.dof])
            throw std::invalid_argument("DofMap: duplicate phase constraint");
        phase_constrained[d.dof] = 1;
        phase_value[d.dof] = d.value;
    }
}

}  // namespace pfrac
