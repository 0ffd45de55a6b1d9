#include "nsf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace nsf {

double Vec2::norm() const { return std::hypot(x, y); }

const char* to_string(BoundaryTag tag) {
    switch (tag) {
        case BoundaryTag::Inlet: return "inlet";
        case BoundaryTag::Outlet: return "outlet";
        case BoundaryTag::Wall: return "wall";
    }
    return "?";
}

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices,
           std::vector<std::array<int, 3>> triangles,
           std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)) {
    build_derived();
    validate();
}

void Mesh::build_derived() {
    const int nv = vertex_count();
    const int nt = triangle_count();
    vertex_tris_.assign(nv, {});
    areas_.resize(nt);
    grads_.resize(nt);
    total_area_ = 0.0;
    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= nv)
                throw MeshError("triangle " + std::to_string(t) + ": vertex index out of range");
            vertex_tris_[tri[k]].push_back(t);
        }
        const Vec2 &a = vertices_[tri[0]], &b = vertices_[tri[1]], &c = vertices_[tri[2]];
        const double area = signed_area(a, b, c);
        areas_[t] = area;
        total_area_ += area;
        if (area > 0.0) {
            const double inv2A = 1.0 / (2.0 * area);
            // grad of hat_i is perpendicular to the opposite edge
            grads_[t][0] = Vec2{b.y - c.y, c.x - b.x} * inv2A;
            grads_[t][1] = Vec2{c.y - a.y, a.x - c.x} * inv2A;
            grads_[t][2] = Vec2{a.y - b.y, b.x - a.x} * inv2A;
        }
    }
    vertex_tag_mask_.assign(nv, 0);
    for (const auto& e : boundary_edges_) {
        if (e.a < 0 || e.a >= nv || e.b < 0 || e.b >= nv)
            throw MeshError("boundary edge: vertex index out of range");
        const auto bit = static_cast<std::uint8_t>(1u << static_cast<int>(e.tag));
        vertex_tag_mask_[e.a] |= bit;
        vertex_tag_mask_[e.b] |= bit;
    }
}

void Mesh::validate() const {
    if (triangles_.empty()) throw MeshError("mesh has no triangles");

    for (int t = 0; t < triangle_count(); ++t)
        if (!(areas_[t] > 0.0))
            throw MeshError("triangle " + std::to_string(t) + ": negative area");

    // Edge-to-triangle incidence; undirected edge key.
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_tris;
    for (int t = 0; t < triangle_count(); ++t) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            int i = tri[k], j = tri[(k + 1) % 3];
            edge_tris[{std::min(i, j), std::max(i, j)}].push_back({t, i});
        }
    }
    for (const auto& [key, owners] : edge_tris) {
        if (owners.size() > 2)
            throw MeshError("non-manifold edge (" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + ")");
        if (owners.size() == 2 && owners[0].second == owners[1].second)
            throw MeshError("interior edge (" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + ") traversed twice in the same direction");
    }

    // Boundary edges exactly cover hull edges, each tagged once.
    std::map<std::pair<int, int>, int> tagged;  // key -> index into boundary_edges_
    for (int i = 0; i < static_cast<int>(boundary_edges_.size()); ++i) {
        const auto& e = boundary_edges_[i];
        auto key = std::make_pair(std::min(e.a, e.b), std::max(e.a, e.b));
        if (tagged.count(key))
            throw MeshError("boundary edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                            ") tagged more than once");
        auto it = edge_tris.find(key);
        if (it == edge_tris.end() || it->second.size() != 1)
            throw MeshError("tagged edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                            ") is not a boundary edge");
        tagged[key] = i;
    }
    for (const auto& [key, owners] : edge_tris) {
        if (owners.size() == 1 && !tagged.count(key))
            throw MeshError("untagged boundary edge (" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + ")");
    }

    // Connectivity over shared edges.
    std::vector<int> comp(triangle_count(), -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    std::map<std::pair<int, int>, std::vector<int>> edge_owner_tris;
    for (const auto& [key, owners] : edge_tris)
        for (auto& [t, from] : owners) edge_owner_tris[key].push_back(t);
    while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            int i = tri[k], j = tri[(k + 1) % 3];
            for (int o : edge_owner_tris[{std::min(i, j), std::max(i, j)}]) {
                if (comp[o] < 0) {
                    comp[o] = 0;
                    stack.push_back(o);
                }
            }
        }
    }
    if (std::any_of(comp.begin(), comp.end(), [](int c) { return c < 0; }))
        throw MeshError("mesh is not connected");

    // Positive measure per tag.
    double len[3] = {0, 0, 0};
    for (const auto& e : boundary_edges_) len[static_cast<int>(e.tag)] += edge_length(e);
    for (int k = 0; k < 3; ++k)
        if (!(len[k] > 0.0))
            throw MeshError(std::string("boundary part '") + to_string(static_cast<BoundaryTag>(k)) +
                            "' has zero measure");
}

double Mesh::edge_length(const BoundaryEdge& e) const {
    return (vertices_[e.b] - vertices_[e.a]).norm();
}

Vec2 Mesh::edge_normal(const BoundaryEdge& e) const {
    // Boundary is traversed CCW (triangle to the left), so the outward normal
    // is the clockwise perpendicular of the edge direction.
    Vec2 d = vertices_[e.b] - vertices_[e.a];
    const double l = d.norm();
    return {d.y / l, -d.x / l};
}

bool Mesh::vertex_on_tag(int v, BoundaryTag tag) const {
    return (vertex_tag_mask_[v] >> static_cast<int>(tag)) & 1u;
}

std::vector<int> Mesh::vertices_on(std::initializer_list<BoundaryTag> tags) const {
    std::uint8_t mask = 0;
    for (auto t : tags) mask |= static_cast<std::uint8_t>(1u << static_cast<int>(t));
    std::vector<int> out;
    for (int v = 0; v < vertex_count(); ++v)
        if (vertex_tag_mask_[v] & mask) out.push_back(v);
    return out;
}

Mesh build_rectangle_channel(double length, double height, int nx, int ny) {
    if (!(length > 0.0) || !(height > 0.0))
        throw std::invalid_argument("build_rectangle_channel: dimensions must be positive");
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build_rectangle_channel: subdivision counts must be >= 1");

    std::vector<Vec2> verts;
    verts.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            verts.emplace_back(length * i / nx, height * j / ny);
    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

    std::vector<std::array<int, 3>> tris;
    tris.reserve(2u * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int v00 = vid(i, j), v10 = vid(i + 1, j);
            int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            if ((i + j) % 2 == 0) {
                tris.push_back({v00, v10, v11});
                tris.push_back({v00, v11, v01});
            } else {
                tris.push_back({v00, v10, v01});
                tris.push_back({v10, v11, v01});
            }
        }
    }

    std::vector<BoundaryEdge> edges;
    auto find_tri = [&](int a, int b) {
        for (int t = 0; t < static_cast<int>(tris.size()); ++t)
            for (int k = 0; k < 3; ++k)
                if (tris[t][k] == a && tris[t][(k + 1) % 3] == b) return t;
        return -1;
    };
    for (int i = 0; i < nx; ++i) {  // bottom, left-to-right
        int a = vid(i, 0), b = vid(i + 1, 0);
        edges.push_back({a, b, BoundaryTag::Wall, find_tri(a, b)});
    }
    for (int j = 0; j < ny; ++j) {  // right, upward
        int a = vid(nx, j), b = vid(nx, j + 1);
        edges.push_back({a, b, BoundaryTag::Outlet, find_tri(a, b)});
    }
    for (int i = nx; i > 0; --i) {  // top, right-to-left
        int a = vid(i, ny), b = vid(i - 1, ny);
        edges.push_back({a, b, BoundaryTag::Wall, find_tri(a, b)});
    }
    for (int j = ny; j > 0; --j) {  // left, downward
        int a = vid(0, j), b = vid(0, j - 1);
        edges.push_back({a, b, BoundaryTag::Inlet, find_tri(a, b)});
    }
    return Mesh(std::move(verts), std::move(tris), std::move(edges));
}

Mesh load_mesh(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw MeshError("line " + std::to_string(lineno) + ": " + msg);
    };

    std::vector<Vec2> verts;
    std::vector<std::array<int, 3>> tris;
    std::vector<BoundaryEdge> edges;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (!header_seen) {
            std::string version;
            if (kind != "nsfmesh" || !(ls >> version) || version != "1")
                fail("expected header 'nsfmesh 1'");
            header_seen = true;
            continue;
        }
        if (kind == "v") {
            double x, y;
            if (!(ls >> x >> y)) fail("malformed vertex line");
            verts.emplace_back(x, y);
        } else if (kind == "t") {
            std::array<int, 3> t{};
            if (!(ls >> t[0] >> t[1] >> t[2])) fail("malformed triangle line");
            tris.push_back(t);
        } else if (kind == "b") {
            int a, b;
            std::string tag;
            if (!(ls >> a >> b >> tag)) fail("malformed boundary line");
            BoundaryEdge e;
            e.a = a;
            e.b = b;
            if (tag == "inlet") e.tag = BoundaryTag::Inlet;
            else if (tag == "outlet") e.tag = BoundaryTag::Outlet;
            else if (tag == "wall") e.tag = BoundaryTag::Wall;
            else fail("unknown boundary tag '" + tag + "'");
            edges.push_back(e);
        } else {
            fail("unknown record '" + kind + "'");
        }
    }
    if (!header_seen) throw MeshError("missing 'nsfmesh 1' header");

    // Resolve owning triangles; orient each tagged edge the way its triangle does.
    for (auto& e : edges) {
        e.triangle = -1;
        for (int t = 0; t < static_cast<int>(tris.size()) && e.triangle < 0; ++t) {
            for (int k = 0; k < 3; ++k) {
                int i = tris[t][k], j = tris[t][(k + 1) % 3];
                if ((i == e.a && j == e.b) || (i == e.b && j == e.a)) {
                    e.a = i;
                    e.b = j;
                    e.triangle = t;
                    break;
                }
            }
        }
    }
    return Mesh(std::move(verts), std::move(tris), std::move(edges));
}

void save_mesh(const Mesh& mesh, std::ostream& out) {
    out << "nsfmesh 1\n";
    out.precision(17);
    for (const auto& v : mesh.vertices()) out << "v " << v.x << " " << v.y << "\n";
    for (const auto& t : mesh.triangles()) out << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
    for (const auto& e : mesh.boundary_edges())
        out << "b " << e.a << " " << e.b << " " << to_string(e.tag) << "\n";
}

double boundary_measure(const Mesh& mesh, BoundaryTag tag) {
    double len = 0.0;
    for (const auto& e : mesh.boundary_edges())
        if (e.tag == tag) len += mesh.edge_length(e);
    return len;
}

double perimeter(const Mesh& mesh) {
    double len = 0.0;
    for (const auto& e : mesh.boundary_edges()) len += mesh.edge_length(e);
    return len;
}

}  // namespace nsf
