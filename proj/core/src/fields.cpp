#include "nsf/fields.hpp"

#include <cmath>

#include "nsf/quadrature.hpp"

namespace nsf {

double ScalarField::eval(int t, const std::array<double, 3>& bary) const {
    const auto& tri = mesh->triangle(t);
    return bary[0] * values[tri[0]] + bary[1] * values[tri[1]] + bary[2] * values[tri[2]];
}

Vec2 ScalarField::gradient(int t) const {
    const auto& tri = mesh->triangle(t);
    Vec2 g{};
    for (int k = 0; k < 3; ++k) {
        const Vec2 gk = mesh->hat_gradient(t, k);
        g = g + gk * values[tri[k]];
    }
    return g;
}

Vec2 VectorField::eval(int t, const std::array<double, 3>& bary) const {
    const auto& tri = mesh->triangle(t);
    Vec2 v{};
    for (int k = 0; k < 3; ++k) {
        v = v + at(tri[k]) * bary[k];
    }
    return v;
}

Eigen::Matrix2d VectorField::jacobian(int t) const {
    const auto& tri = mesh->triangle(t);
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    for (int k = 0; k < 3; ++k) {
        const Vec2 g = mesh->hat_gradient(t, k);
        const Vec2 u = at(tri[k]);
        J(0, 0) += u.x * g.x;
        J(0, 1) += u.x * g.y;
        J(1, 0) += u.y * g.x;
        J(1, 1) += u.y * g.y;
    }
    return J;
}

namespace {

template <typename F>
double integrate_tris(const Mesh& mesh, F&& per_point) {
    double acc = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const double scale = 2.0 * mesh.triangle_area(t);
        for (const auto& qp : triangle_rule())
            acc += scale * 0.5 * qp.weight * per_point(t, qp.bary);
    }
    return acc;
}

template <typename F>
double integrate_edges(const Mesh& mesh, std::initializer_list<BoundaryTag> tags, F&& per_point) {
    double acc = 0.0;
    for (const auto& e : mesh.boundary_edges()) {
        bool match = false;
        for (auto tag : tags) match |= (e.tag == tag);
        if (!match) continue;
        const double len = mesh.edge_length(e);
        for (const auto& qp : edge_rule()) acc += len * qp.weight * per_point(e, qp.s);
    }
    return acc;
}

double edge_interp(const ScalarField& f, const BoundaryEdge& e, double s) {
    return (1.0 - s) * f.values[e.a] + s * f.values[e.b];
}

}  // namespace

double l2_norm(const ScalarField& f) {
    return std::sqrt(integrate_tris(*f.mesh, [&](int t, const auto& b) {
        const double v = f.eval(t, b);
        return v * v;
    }));
}

double lq_norm(const ScalarField& f, double q) {
    const double acc = integrate_tris(
        *f.mesh, [&](int t, const auto& b) { return std::pow(std::abs(f.eval(t, b)), q); });
    return std::pow(acc, 1.0 / q);
}

double h1_seminorm(const ScalarField& f) {
    return std::sqrt(integrate_tris(*f.mesh, [&](int t, const auto&) {
        const Vec2 g = f.gradient(t);
        return g.dot(g);
    }));
}

double mean_value(const ScalarField& f) {
    return integrate_tris(*f.mesh, [&](int t, const auto& b) { return f.eval(t, b); }) /
           f.mesh->total_area();
}

double boundary_l2(const ScalarField& f, std::initializer_list<BoundaryTag> tags) {
    return std::sqrt(integrate_edges(*f.mesh, tags, [&](const BoundaryEdge& e, double s) {
        const double v = edge_interp(f, e, s);
        return v * v;
    }));
}

double boundary_lq(const ScalarField& f, std::initializer_list<BoundaryTag> tags, double q) {
    const double acc = integrate_edges(*f.mesh, tags, [&](const BoundaryEdge& e, double s) {
        return std::pow(std::abs(edge_interp(f, e, s)), q);
    });
    return std::pow(acc, 1.0 / q);
}

double boundary_l1(const ScalarField& f, std::initializer_list<BoundaryTag> tags) {
    return integrate_edges(*f.mesh, tags, [&](const BoundaryEdge& e, double s) {
        return std::abs(edge_interp(f, e, s));
    });
}

double l2_norm(const VectorField& v) {
    return std::sqrt(integrate_tris(*v.mesh, [&](int t, const auto& b) {
        const Vec2 u = v.eval(t, b);
        return u.dot(u);
    }));
}

double lq_norm(const VectorField& v, double q) {
    const double acc = integrate_tris(
        *v.mesh, [&](int t, const auto& b) { return std::pow(v.eval(t, b).norm(), q); });
    return std::pow(acc, 1.0 / q);
}

double grad_l2(const VectorField& v) {
    return std::sqrt(integrate_tris(*v.mesh, [&](int t, const auto&) {
        return v.jacobian(t).squaredNorm();
    }));
}

double symgrad_l2(const VectorField& v) {
    return std::sqrt(integrate_tris(*v.mesh, [&](int t, const auto&) {
        const Eigen::Matrix2d J = v.jacobian(t);
        const Eigen::Matrix2d D = 0.5 * (J + J.transpose());
        return D.squaredNorm();
    }));
}

double div_l2(const VectorField& v) {
    return std::sqrt(integrate_tris(*v.mesh, [&](int t, const auto&) {
        const double d = v.jacobian(t).trace();
        return d * d;
    }));
}

double boundary_l2(const VectorField& v, std::initializer_list<BoundaryTag> tags) {
    return std::sqrt(integrate_edges(*v.mesh, tags, [&](const BoundaryEdge& e, double s) {
        const Vec2 u = v.at(e.a) * (1.0 - s) + v.at(e.b) * s;
        return u.dot(u);
    }));
}

double v_norm(const VectorField& v) {
    const double d = symgrad_l2(v);
    const double g = boundary_l2(v, {BoundaryTag::Wall});
    return std::sqrt(d * d + g * g);
}

double h1_gamma_norm(const ScalarField& f) {
    const double d = h1_seminorm(f);
    const double g = boundary_l2(f, {BoundaryTag::Wall});
    return std::sqrt(d * d + g * g);
}

Eigen::VectorXd p1_integral_weights(const Mesh& mesh) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const double third = mesh.triangle_area(t) / 3.0;
        for (int k = 0; k < 3; ++k) w[mesh.triangle(t)[k]] += third;
    }
    return w;
}

}  // namespace nsf
