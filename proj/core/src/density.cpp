#include "nsf/density.hpp"

#include <cmath>

#include "nsf/quadrature.hpp"

namespace nsf {

ScalarPotential solve_scalar_potential(const Mesh& mesh, const ScalarField& g, double rel_tol,
                                       const SolveOptions& opts) {
    const double imbalance = check_compatibility(g, mesh);
    const double scale = boundary_l1(g, {BoundaryTag::Inlet, BoundaryTag::Outlet});
    if (scale > 0.0 && std::abs(imbalance) > rel_tol * scale)
        throw CompatibilityError("net boundary flux " + std::to_string(imbalance) +
                                 " violates the compatibility condition (|imbalance| > " +
                                 std::to_string(rel_tol) + "·‖g‖₁)");

    SparseSystem sys(mesh.vertex_count());
    sys.matrix = assemble_stiffness(mesh, constant_coeff(1.0));
    sys.rhs = assemble_boundary_rhs(mesh, {BoundaryTag::Inlet, BoundaryTag::Outlet}, g);
    sys.mean_constraint = p1_integral_weights(mesh);

    ScalarPotential pot;
    pot.psi = ScalarField(mesh);
    pot.psi.values = solve(sys, opts);
    pot.flux = g;
    return pot;
}

DensityField recover_density(const VectorField& u, const ScalarPotential& potential, double rho0,
                             double eps_stag, double eps_align, const SolveOptions& opts) {
    const Mesh& mesh = *u.mesh;
    const auto& rule = triangle_rule();
    const int npts = 3 * mesh.triangle_count();

    DensityField out;
    out.mesh = &mesh;
    out.rho.assign(npts, 0.0);
    out.cases.assign(npts, DensityCase::Stagnation);
    out.phi = ScalarField(mesh);

    // First pass: classification, Case-1 values, Case-2 defect a = ρ₁u − ∇ψ.
    std::vector<Vec2> defect(npts, Vec2{});
    bool any_corrected = false;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const Vec2 gpsi = potential.psi.gradient(t);
        for (int k = 0; k < 3; ++k) {
            const int idx = 3 * t + k;
            const Vec2 uq = u.eval(t, rule[k].bary);
            const double unorm = uq.norm();
            if (unorm <= eps_stag) {
                out.rho[idx] = rho0;
                out.cases[idx] = DensityCase::Stagnation;
                continue;
            }
            const double gnorm = gpsi.norm();
            const double rejection = std::abs(gpsi.dot(uq.perp()));
            if (rejection <= eps_align * gnorm * unorm) {
                out.rho[idx] = gnorm / unorm;
                out.cases[idx] = DensityCase::Aligned;
                if (gpsi.dot(uq) < 0.0) ++out.alignment_anomalies;
                continue;
            }
            const double rho1 = gnorm / unorm;
            defect[idx] = uq * rho1 - gpsi;
            out.rho[idx] = rho1;  // corrected below
            out.cases[idx] = DensityCase::Corrected;
            any_corrected = true;
        }
    }

    if (any_corrected) {
        // ∫ ∇φ·∇v = ∫ a·∇v, zero mean.
        SparseSystem sys(mesh.vertex_count());
        sys.matrix = assemble_stiffness(mesh, constant_coeff(1.0));
        sys.rhs = Eigen::VectorXd::Zero(mesh.vertex_count());
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangle(t);
            const double area = mesh.triangle_area(t);
            for (int k = 0; k < 3; ++k) {
                const Vec2& a = defect[3 * t + k];
                if (a.x == 0.0 && a.y == 0.0) continue;
                for (int i = 0; i < 3; ++i)
                    sys.rhs[tri[i]] += rule[k].weight * area * a.dot(mesh.hat_gradient(t, i));
            }
        }
        sys.mean_constraint = p1_integral_weights(mesh);
        out.phi.values = solve(sys, opts);

        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const Vec2 gphi = out.phi.gradient(t);
            for (int k = 0; k < 3; ++k) {
                const int idx = 3 * t + k;
                if (out.cases[idx] != DensityCase::Corrected) continue;
                const Vec2 uq = u.eval(t, rule[k].bary);
                const double u2 = uq.dot(uq);
                out.rho[idx] = std::max(out.rho[idx] - gphi.dot(uq) / u2, 0.0);
            }
        }
    }

    for (double r : out.rho) out.max_rho = std::max(out.max_rho, r);
    out.nodal = project_to_p1(mesh, out.rho);
    return out;
}

ContinuityResidual verify_weak_continuity(const DensityField& rho, const VectorField& u,
                                          const ScalarField& g, const Mesh& mesh) {
    const auto& rule = triangle_rule();
    Eigen::VectorXd r = -assemble_boundary_rhs(mesh, {BoundaryTag::Inlet, BoundaryTag::Outlet}, g);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangle(t);
        const double area = mesh.triangle_area(t);
        for (int k = 0; k < 3; ++k) {
            const Vec2 mq = u.eval(t, rule[k].bary) * rho.rho[3 * t + k];
            for (int i = 0; i < 3; ++i)
                r[tri[i]] += rule[k].weight * area * mq.dot(mesh.hat_gradient(t, i));
        }
    }
    ContinuityResidual out;
    out.residual_l2 = r.norm();
    out.flux_scale = boundary_l2(g, {BoundaryTag::Inlet, BoundaryTag::Outlet});
    out.normalized = out.residual_l2 / std::max(out.flux_scale, 1e-300);
    return out;
}

double momentum_lq_norm(const DensityField& rho, const VectorField& u, double q) {
    const auto& rule = triangle_rule();
    const Mesh& mesh = *u.mesh;
    double acc = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k)
            acc += rule[k].weight * mesh.triangle_area(t) *
                   std::pow(rho.rho[3 * t + k] * u.eval(t, rule[k].bary).norm(), q);
    return std::pow(acc, 1.0 / q);
}

double density_lr_norm(const DensityField& rho, double r) {
    const auto& rule = triangle_rule();
    const Mesh& mesh = *rho.mesh;
    double acc = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k)
            acc += rule[k].weight * mesh.triangle_area(t) * std::pow(rho.rho[3 * t + k], r);
    return std::pow(acc, 1.0 / r);
}

EstimateAudit audit_momentum_norm(const DensityField& rho, const VectorField& u,
                                  const ScalarField& g, double q) {
    EstimateAudit audit;
    audit.name = "cotamm_ratio";
    audit.asserted = false;
    const double gq = boundary_lq(g, {BoundaryTag::Inlet, BoundaryTag::Outlet}, q);
    if (gq == 0.0) {
        audit.lhs = 0.0;
        audit.rhs = 0.0;  // not applicable
        return audit;
    }
    audit.lhs = momentum_lq_norm(rho, u, q) / gq;
    audit.rhs = audit.lhs;
    return audit;
}

ScalarField project_to_p1(const Mesh& mesh, const std::vector<double>& qp_values) {
    const auto& rule = triangle_rule();
    SparseSystem sys(mesh.vertex_count());
    sys.matrix = assemble_mass(mesh, constant_coeff(1.0));
    sys.rhs = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangle(t);
        const double area = mesh.triangle_area(t);
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                sys.rhs[tri[i]] +=
                    rule[k].weight * area * qp_values[3 * t + k] * rule[k].bary[i];
    }
    ScalarField out(mesh);
    out.values = solve(sys);
    return out;
}

VectorField project_to_p1_vector(const Mesh& mesh, const std::vector<Vec2>& qp_values) {
    std::vector<double> xs(qp_values.size()), ys(qp_values.size());
    for (size_t i = 0; i < qp_values.size(); ++i) {
        xs[i] = qp_values[i].x;
        ys[i] = qp_values[i].y;
    }
    const ScalarField fx = project_to_p1(mesh, xs);
    const ScalarField fy = project_to_p1(mesh, ys);
    VectorField out(mesh);
    for (int v = 0; v < mesh.vertex_count(); ++v) out.set(v, {fx[v], fy[v]});
    return out;
}

}  // namespace nsf
