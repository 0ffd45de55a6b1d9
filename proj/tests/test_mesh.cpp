#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nsf/mesh.hpp"

using namespace nsf;

namespace {

int count_tag(const Mesh& m, BoundaryTag tag) {
    int n = 0;
    for (const auto& e : m.boundary_edges())
        if (e.tag == tag) ++n;
    return n;
}

// Shoelace area of the boundary loop, walking tagged edges head-to-tail.
double shoelace_area(const Mesh& m) {
    double acc = 0.0;
    for (const auto& e : m.boundary_edges()) {
        const Vec2& a = m.vertex(e.a);
        const Vec2& b = m.vertex(e.b);
        acc += a.x * b.y - b.x * a.y;
    }
    return 0.5 * acc;
}

}  // namespace

TEST_CASE("channel 4x1 counts and area") {
    Mesh m = build_rectangle_channel(1.0, 0.25, 4, 1);
    CHECK(m.vertex_count() == 10);
    CHECK(m.triangle_count() == 8);
    CHECK(m.total_area() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(count_tag(m, BoundaryTag::Inlet) == 1);
    CHECK(count_tag(m, BoundaryTag::Outlet) == 1);
    // one edge per boundary cell along top and bottom
    CHECK(count_tag(m, BoundaryTag::Wall) == 8);
}

TEST_CASE("channel 1x1 is the two-triangle square") {
    Mesh m = build_rectangle_channel(1.0, 1.0, 1, 1);
    CHECK(m.triangle_count() == 2);
    CHECK(m.triangle_area(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.triangle_area(1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("channel 32x8 partitions the domain") {
    Mesh m = build_rectangle_channel(2.0, 0.5, 32, 8);
    double sum = 0.0;
    for (int t = 0; t < m.triangle_count(); ++t) sum += m.triangle_area(t);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invalid channel arguments rejected") {
    CHECK_THROWS_AS(build_rectangle_channel(0.0, 0.25, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_rectangle_channel(1.0, 0.25, 0, 1), std::invalid_argument);
}

TEST_CASE("boundary measures of the 1.0x0.25 channel") {
    Mesh m = build_rectangle_channel(1.0, 0.25, 4, 1);
    CHECK(boundary_measure(m, BoundaryTag::Inlet) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(boundary_measure(m, BoundaryTag::Outlet) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(boundary_measure(m, BoundaryTag::Wall) == doctest::Approx(2.0).epsilon(1e-14));
    const double per = perimeter(m);
    const double parts = boundary_measure(m, BoundaryTag::Inlet) +
                         boundary_measure(m, BoundaryTag::Outlet) +
                         boundary_measure(m, BoundaryTag::Wall);
    CHECK(parts == doctest::Approx(per).epsilon(1e-12));
}

TEST_CASE("shoelace consistency on generated meshes") {
    for (auto [nx, ny] : {std::pair{1, 1}, {4, 1}, {7, 3}}) {
        Mesh m = build_rectangle_channel(1.3, 0.4, nx, ny);
        CHECK(shoelace_area(m) == doctest::Approx(m.total_area()).epsilon(1e-12));
    }
}

TEST_CASE("mesh text format round-trips") {
    Mesh m = build_rectangle_channel(1.0, 1.0, 1, 1);
    std::ostringstream out;
    save_mesh(m, out);
    std::istringstream in(out.str());
    Mesh back = load_mesh(in);
    REQUIRE(back.vertex_count() == m.vertex_count());
    REQUIRE(back.triangle_count() == m.triangle_count());
    for (int i = 0; i < m.vertex_count(); ++i) {
        CHECK(back.vertex(i).x == m.vertex(i).x);
        CHECK(back.vertex(i).y == m.vertex(i).y);
    }
    for (int t = 0; t < m.triangle_count(); ++t) CHECK(back.triangle(t) == m.triangle(t));
    REQUIRE(back.boundary_edges().size() == m.boundary_edges().size());
    for (size_t i = 0; i < m.boundary_edges().size(); ++i) {
        CHECK(back.boundary_edges()[i].a == m.boundary_edges()[i].a);
        CHECK(back.boundary_edges()[i].b == m.boundary_edges()[i].b);
        CHECK(back.boundary_edges()[i].tag == m.boundary_edges()[i].tag);
    }
}

TEST_CASE("clockwise triangle rejected") {
    const std::string text =
        "nsfmesh 1\n"
        "v 0 0\nv 1 0\nv 0 1\n"
        "t 0 2 1\n"
        "b 0 1 inlet\nb 1 2 outlet\nb 2 0 wall\n";
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(load_mesh(in), doctest::Contains("negative area"), MeshError);
}

TEST_CASE("missing hull edge rejected") {
    const std::string text =
        "nsfmesh 1\n"
        "v 0 0\nv 1 0\nv 1 1\nv 0 1\n"
        "t 0 1 2\nt 0 2 3\n"
        "b 3 0 inlet\nb 1 2 outlet\nb 0 1 wall\n";  // top edge (2,3) untagged
    std::istringstream in(text);
    CHECK_THROWS_WITH_AS(load_mesh(in), doctest::Contains("untagged boundary edge"), MeshError);
}

TEST_CASE("missing header rejected") {
    std::istringstream in("v 0 0\n");
    CHECK_THROWS_AS(load_mesh(in), MeshError);
}

TEST_CASE("edge normals point outward") {
    Mesh m = build_rectangle_channel(1.0, 0.25, 4, 2);
    const Vec2 center{0.5, 0.125};
    for (const auto& e : m.boundary_edges()) {
        const Vec2 mid = (m.vertex(e.a) + m.vertex(e.b)) * 0.5;
        CHECK(m.edge_normal(e).dot(mid - center) > 0.0);
        CHECK(m.edge_normal(e).norm() == doctest::Approx(1.0).epsilon(1e-14));
    }
}
