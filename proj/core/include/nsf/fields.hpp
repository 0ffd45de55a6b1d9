#pragma once

#include <Eigen/Dense>
#include <initializer_list>

#include "nsf/mesh.hpp"

namespace nsf {

/// P1 nodal scalar field: one dof per mesh vertex.
struct ScalarField {
    const Mesh* mesh = nullptr;
    Eigen::VectorXd values;

    ScalarField() = default;
    explicit ScalarField(const Mesh& m, double fill = 0.0)
        : mesh(&m), values(Eigen::VectorXd::Constant(m.vertex_count(), fill)) {}

    double operator[](int i) const { return values[i]; }
    double& operator[](int i) { return values[i]; }

    /// Barycentric interpolation inside triangle t.
    double eval(int t, const std::array<double, 3>& bary) const;
    /// Constant gradient on triangle t.
    Vec2 gradient(int t) const;
};

/// P1 nodal vector field, interleaved dofs (2i = x, 2i+1 = y).
struct VectorField {
    const Mesh* mesh = nullptr;
    Eigen::VectorXd values;

    VectorField() = default;
    explicit VectorField(const Mesh& m, Vec2 fill = {})
        : mesh(&m), values(2 * m.vertex_count()) {
        for (int i = 0; i < m.vertex_count(); ++i) {
            values[2 * i] = fill.x;
            values[2 * i + 1] = fill.y;
        }
    }

    Vec2 at(int i) const { return {values[2 * i], values[2 * i + 1]}; }
    void set(int i, Vec2 v) {
        values[2 * i] = v.x;
        values[2 * i + 1] = v.y;
    }

    Vec2 eval(int t, const std::array<double, 3>& bary) const;
    /// Constant Jacobian on triangle t; J(r,c) = d u_r / d x_c.
    Eigen::Matrix2d jacobian(int t) const;
};

// --- quadrature-exact norms of P1 fields ---

double l2_norm(const ScalarField& f);
double lq_norm(const ScalarField& f, double q);
double h1_seminorm(const ScalarField& f);
double mean_value(const ScalarField& f);
double boundary_l2(const ScalarField& f, std::initializer_list<BoundaryTag> tags);
/// (l2 boundary norm of nodal data restricted to tagged edges)
double boundary_lq(const ScalarField& f, std::initializer_list<BoundaryTag> tags, double q);
double boundary_l1(const ScalarField& f, std::initializer_list<BoundaryTag> tags);

double l2_norm(const VectorField& v);
double lq_norm(const VectorField& v, double q);
double grad_l2(const VectorField& v);
double symgrad_l2(const VectorField& v);
double div_l2(const VectorField& v);
double boundary_l2(const VectorField& v, std::initializer_list<BoundaryTag> tags);

/// (‖Dv‖² + ‖v‖²_{2,Γ})^{1/2} with Γ = wall part.
double v_norm(const VectorField& v);
/// (‖∇f‖² + ‖f‖²_{2,Γ})^{1/2}
double h1_gamma_norm(const ScalarField& f);

/// Row of vertex weights w_i = ∫ φ_i dx (exact for P1).
Eigen::VectorXd p1_integral_weights(const Mesh& mesh);

}  // namespace nsf
