#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsf {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // counter-clockwise perpendicular
    Vec2 perp() const { return {-y, x}; }
    double norm() const;
};

enum class BoundaryTag : std::uint8_t { Inlet = 0, Outlet = 1, Wall = 2 };

const char* to_string(BoundaryTag tag);

struct BoundaryEdge {
    int a = -1;             // vertex indices, ordered so the owning triangle
    int b = -1;             // lies to the left (outward normal = (b-a).perp scaled by -1)
    BoundaryTag tag = BoundaryTag::Wall;
    int triangle = -1;      // owning triangle
};

class MeshError : public std::runtime_error {
  public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// 2D simplicial mesh of a polygonal domain with a tagged boundary.
/// Immutable after construction; validate() is run by every factory.
class Mesh {
  public:
    Mesh(std::vector<Vec2> vertices,
         std::vector<std::array<int, 3>> triangles,
         std::vector<BoundaryEdge> boundary_edges);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int triangle_count() const { return static_cast<int>(triangles_.size()); }

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
    const std::vector<std::vector<int>>& vertex_to_triangles() const { return vertex_tris_; }

    const Vec2& vertex(int i) const { return vertices_[i]; }
    const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }

    double triangle_area(int t) const { return areas_[t]; }
    double total_area() const { return total_area_; }
    double edge_length(const BoundaryEdge& e) const;
    /// Unit outward normal on a boundary edge.
    Vec2 edge_normal(const BoundaryEdge& e) const;

    /// Constant gradient of the P1 hat function of local vertex `local` on triangle `t`.
    Vec2 hat_gradient(int t, int local) const { return grads_[t][local]; }

    bool vertex_on_tag(int v, BoundaryTag tag) const;
    /// Vertices touching any edge carrying one of the given tags.
    std::vector<int> vertices_on(std::initializer_list<BoundaryTag> tags) const;

  private:
    void validate() const;
    void build_derived();

    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::vector<std::vector<int>> vertex_tris_;
    std::vector<double> areas_;
    std::vector<std::array<Vec2, 3>> grads_;
    std::vector<std::uint8_t> vertex_tag_mask_;  // bit per BoundaryTag
    double total_area_ = 0.0;
};

/// Structured channel mesh on [0,length]x[0,height] with alternating (crossed)
/// diagonals. Left edge tagged Inlet, right edge Outlet, top/bottom Wall.
Mesh build_rectangle_channel(double length, double height, int nx, int ny);

/// Parses the "nsfmesh 1" text format. Throws MeshError with a line number on
/// malformed input, and on any invariant violation of the resulting mesh.
Mesh load_mesh(std::istream& in);
void save_mesh(const Mesh& mesh, std::ostream& out);

double boundary_measure(const Mesh& mesh, BoundaryTag tag);
double perimeter(const Mesh& mesh);

}  // namespace nsf
