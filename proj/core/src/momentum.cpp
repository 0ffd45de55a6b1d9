#include "nsf/momentum.hpp"

#include <cmath>

namespace nsf {

SlipConstraints build_slip_constraints(const Mesh& mesh, const VectorField* dirichlet_values) {
    const int nv = mesh.vertex_count();
    SlipConstraints sc;

    // Collect wall normals per vertex.
    std::vector<std::vector<Vec2>> normals(nv);
    for (const auto& e : mesh.boundary_edges()) {
        if (e.tag != BoundaryTag::Wall) continue;
        const Vec2 n = mesh.edge_normal(e);
        normals[e.a].push_back(n);
        normals[e.b].push_back(n);
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * nv);
    for (int v = 0; v < nv; ++v) {
        const bool on_dirichlet =
            mesh.vertex_on_tag(v, BoundaryTag::Inlet) || mesh.vertex_on_tag(v, BoundaryTag::Outlet);
        if (on_dirichlet) {
            // Γ_D takes precedence: both components prescribed in original coords.
            trips.emplace_back(2 * v, 2 * v, 1.0);
            trips.emplace_back(2 * v + 1, 2 * v + 1, 1.0);
            const Vec2 val = dirichlet_values ? dirichlet_values->at(v) : Vec2{};
            sc.dirichlet.push_back({2 * v, val.x});
            sc.dirichlet.push_back({2 * v + 1, val.y});
            continue;
        }
        if (normals[v].empty()) {
            trips.emplace_back(2 * v, 2 * v, 1.0);
            trips.emplace_back(2 * v + 1, 2 * v + 1, 1.0);
            continue;
        }
        // Independent wall normals at a corner pin the vertex entirely.
        bool independent = false;
        const Vec2 n0 = normals[v][0];
        for (const Vec2& n : normals[v])
            if (std::abs(n0.x * n.y - n0.y * n.x) > 1e-8) independent = true;
        if (independent) {
            trips.emplace_back(2 * v, 2 * v, 1.0);
            trips.emplace_back(2 * v + 1, 2 * v + 1, 1.0);
            sc.dirichlet.push_back({2 * v, 0.0});
            sc.dirichlet.push_back({2 * v + 1, 0.0});
            sc.double_constrained.push_back(v);
            continue;
        }
        Vec2 n{};
        for (const Vec2& nk : normals[v]) n = n + nk;
        const double len = n.norm();
        n = {n.x / len, n.y / len};
        const Vec2 t{-n.y, n.x};
        // x = T x̃ with x̃ = (tangential, normal); columns of the block are (t, n).
        trips.emplace_back(2 * v, 2 * v, t.x);
        trips.emplace_back(2 * v + 1, 2 * v, t.y);
        trips.emplace_back(2 * v, 2 * v + 1, n.x);
        trips.emplace_back(2 * v + 1, 2 * v + 1, n.y);
        sc.dirichlet.push_back({2 * v + 1, 0.0});  // normal dof
    }
    sc.rotation.resize(2 * nv, 2 * nv);
    sc.rotation.setFromTriplets(trips.begin(), trips.end());
    return sc;
}

SparseSystem apply_slip_constraints(const SlipConstraints& sc, const SparseMat& matrix,
                                    const Eigen::VectorXd& rhs) {
    SparseSystem sys(static_cast<int>(matrix.rows()));
    sys.matrix = sc.rotation.transpose() * matrix * sc.rotation;
    sys.rhs = sc.rotation.transpose() * rhs;
    sys.dirichlet = sc.dirichlet;
    return sys;
}

VectorField build_lifting(const Mesh& mesh, const BoundaryData& bd, LiftingMode mode) {
    const SparseMat A = expand_to_vector_dofs(assemble_stiffness(mesh, constant_coeff(1.0)));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(A.rows());

    VectorField lift(mesh);
    if (mode == LiftingMode::Harmonic) {
        SlipConstraints sc = build_slip_constraints(mesh, &bd.u_dirichlet);
        SparseSystem sys = apply_slip_constraints(sc, A, zero);
        const Eigen::VectorXd x = solve(sys);
        lift.values = sc.rotation * x;
    } else {
        SparseSystem sys(static_cast<int>(A.rows()));
        sys.matrix = A;
        sys.rhs = zero;
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            const bool on_d = mesh.vertex_on_tag(v, BoundaryTag::Inlet) ||
                              mesh.vertex_on_tag(v, BoundaryTag::Outlet);
            const bool on_wall = mesh.vertex_on_tag(v, BoundaryTag::Wall);
            if (on_d) {
                const Vec2 val = bd.u_dirichlet.at(v);
                sys.dirichlet.push_back({2 * v, val.x});
                sys.dirichlet.push_back({2 * v + 1, val.y});
            } else if (on_wall) {
                sys.dirichlet.push_back({2 * v, 0.0});
                sys.dirichlet.push_back({2 * v + 1, 0.0});
            }
        }
        lift.values = solve(sys);
    }

    // Exact slip at plain wall vertices, whatever the solve produced.
    SlipConstraints sc = build_slip_constraints(mesh);
    for (int v : mesh.vertices_on({BoundaryTag::Wall})) {
        if (mesh.vertex_on_tag(v, BoundaryTag::Inlet) || mesh.vertex_on_tag(v, BoundaryTag::Outlet))
            continue;
        // project out the normal component
        Vec2 n{};
        int count = 0;
        for (const auto& e : mesh.boundary_edges()) {
            if (e.tag != BoundaryTag::Wall || (e.a != v && e.b != v)) continue;
            n = n + mesh.edge_normal(e);
            ++count;
        }
        if (count == 0) continue;
        const double len = n.norm();
        if (len == 0.0) continue;
        n = {n.x / len, n.y / len};
        const Vec2 uv = lift.at(v);
        const double un = uv.dot(n);
        lift.set(v, {uv.x - un * n.x, uv.y - un * n.y});
    }
    return lift;
}

MomentumSolution solve_momentum(const MomentumProblem& problem, const SolveOptions& opts) {
    const Mesh& mesh = *problem.mesh;
    const CoefficientSet& cs = *problem.coeffs;
    const BoundaryData& bd = *problem.boundary;

    const SparseMat K = assemble_advection_centered(mesh, problem.m);
    const SparseMat skew_scalar =
        SparseMat(0.5 * (K - SparseMat(K.transpose()))) +
        SparseMat(0.5 * assemble_boundary_mass_nodal(
                      mesh, {BoundaryTag::Inlet, BoundaryTag::Outlet}, bd.flux));
    const SparseMat convection = expand_to_vector_dofs(skew_scalar);
    const SparseMat viscous =
        assemble_symgrad(mesh, cs.mu.as_coefficient(), cs.lambda.as_coefficient(), &problem.xi);
    const SparseMat friction = expand_to_vector_dofs(
        assemble_boundary_mass(mesh, {BoundaryTag::Wall}, cs.gamma.as_coefficient(), &problem.xi));

    const SparseMat A = convection + viscous + friction;

    // 𝓖(m, ξ, ũ_D, ·): lifting loads. The m⊗ũ_D term is Kᵀũ_D per component.
    Eigen::VectorXd rhs = assemble_div_rhs(mesh, problem.pi);
    rhs += expand_to_vector_dofs(SparseMat(K.transpose())) * bd.lifting.values;
    rhs -= viscous * bd.lifting.values;
    rhs -= friction * bd.lifting.values;

    SlipConstraints sc = build_slip_constraints(mesh);
    SparseSystem sys = apply_slip_constraints(sc, A, rhs);

    MomentumSolution sol;
    sol.w = VectorField(mesh);
    sol.w.values = sc.rotation * solve(sys, opts);
    sol.u = VectorField(mesh);
    sol.u.values = sol.w.values + bd.lifting.values;
    sol.v_norm = v_norm(sol.w);
    sol.audit = audit_momentum_estimate(sol, problem);
    return sol;
}

EstimateAudit audit_momentum_estimate(const MomentumSolution& sol, const MomentumProblem& problem,
                                      double pressure_bound) {
    const CoefficientSet& cs = *problem.coeffs;
    const BoundaryData& bd = *problem.boundary;
    const double mu_lo = cs.mu_lo();
    const double q = problem.exponent_q;
    const double p = 1.0 / (0.5 - 1.0 / q);  // 1/p = 1/2 − 1/q

    const double wn = v_norm(sol.w);
    const double lhs = std::min(0.5 * mu_lo, cs.gamma_lo()) * wn * wn;

    const double pi_term = pressure_bound >= 0.0 ? pressure_bound : l2_norm(problem.pi);
    const double sum = pi_term + lq_norm(problem.m, q) * lq_norm(bd.lifting, p) +
                       cs.mu_hi() * symgrad_l2(bd.lifting) + cs.lambda_hi() * div_l2(bd.lifting);
    const double lift_gamma = boundary_l2(bd.lifting, {BoundaryTag::Wall});
    const double rhs = (2.0 / mu_lo) * sum * sum + cs.gamma_hi() * lift_gamma * lift_gamma;

    EstimateAudit audit;
    audit.name = pressure_bound >= 0.0 ? "cotau_r4" : "cotau";
    audit.lhs = lhs;
    audit.rhs = rhs;
    audit.pass = audit_pass(lhs, rhs);
    audit.asserted = pressure_bound < 0.0;
    return audit;
}

}  // namespace nsf
