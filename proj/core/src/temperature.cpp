#include "nsf/temperature.hpp"

#include <cmath>

namespace nsf {

namespace {

SparseMat lump(const SparseMat& M) {
    Eigen::VectorXd d = M * Eigen::VectorXd::Ones(M.cols());
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < d.size(); ++i)
        if (d[i] != 0.0) trips.emplace_back(i, i, d[i]);
    SparseMat L(M.rows(), M.cols());
    L.setFromTriplets(trips.begin(), trips.end());
    return L;
}

}  // namespace

TemperatureSolution solve_temperature(const TemperatureProblem& problem, const SolveOptions& opts) {
    const Mesh& mesh = *problem.mesh;
    const CoefficientSet& cs = *problem.coeffs;
    const BoundaryData& bd = *problem.boundary;

    SparseMat advection;
    if (problem.scheme == AdvectionScheme::Centered) {
        const SparseMat K = assemble_advection_centered(mesh, problem.m);
        advection = SparseMat(0.5 * (K - SparseMat(K.transpose()))) +
                    SparseMat(0.5 * assemble_boundary_mass_nodal(
                                  mesh, {BoundaryTag::Inlet, BoundaryTag::Outlet}, bd.flux));
    } else {
        advection = assemble_advection_upwind(mesh, problem.m);
    }

    const SparseMat stiffness =
        assemble_stiffness(mesh, cs.k.as_coefficient(), &problem.xi);
    SparseMat robin_wall = assemble_boundary_mass(mesh, {BoundaryTag::Wall},
                                                  cs.h_c_wall.as_coefficient(), &problem.xi);
    SparseMat robin_out = assemble_boundary_mass(mesh, {BoundaryTag::Outlet},
                                                 cs.h_c_outlet.as_coefficient(), &problem.xi);
    if (problem.scheme == AdvectionScheme::Upwind) {
        // Mass-lumped boundary terms keep the M-matrix structure.
        robin_wall = lump(robin_wall);
        robin_out = lump(robin_out);
    }

    SparseSystem sys(mesh.vertex_count());
    sys.matrix = SparseMat(bd.c_v * advection) + stiffness + robin_wall + robin_out;
    // Unknown is u = θ − θ_in: rhs carries h_c (θ_e − θ_in).
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.vertex_count());
    sys.rhs = (bd.theta_wall - bd.theta_in) * (robin_wall * ones) +
              (bd.theta_out - bd.theta_in) * (robin_out * ones);
    for (int v : mesh.vertices_on({BoundaryTag::Inlet})) sys.dirichlet.push_back({v, 0.0});

    TemperatureSolution sol;
    sol.theta = ScalarField(mesh);
    sol.theta.values = solve(sys, opts).array() + bd.theta_in;
    sol.internal_energy = ScalarField(mesh);
    sol.internal_energy.values = bd.c_v * sol.theta.values;
    sol.energy_norm = h1_gamma_norm(sol.theta);
    sol.min_theta = sol.theta.values.minCoeff();
    sol.max_theta = sol.theta.values.maxCoeff();
    sol.audit = audit_temperature_estimate(sol, problem);
    return sol;
}

double temperature_radius_R2(const Mesh& mesh, const CoefficientSet& coeffs,
                             const BoundaryData& bd) {
    const double wall_len = boundary_measure(mesh, BoundaryTag::Wall);
    const double out_len = boundary_measure(mesh, BoundaryTag::Outlet);
    const double data_sq = (bd.theta_in + bd.theta_wall) * (bd.theta_in + bd.theta_wall) * wall_len +
                           (bd.theta_in + bd.theta_out) * (bd.theta_in + bd.theta_out) * out_len;
    const double denom = std::min(2.0 * coeffs.k_lo(), coeffs.h_lo_wall());
    return std::sqrt(coeffs.h_hi() / denom * data_sq);
}

EstimateAudit audit_temperature_estimate(const TemperatureSolution& sol,
                                         const TemperatureProblem& problem) {
    EstimateAudit audit;
    audit.name = "cotaeg";
    const double R2 = temperature_radius_R2(*problem.mesh, *problem.coeffs, *problem.boundary);
    audit.lhs = sol.energy_norm * sol.energy_norm;
    audit.rhs = R2 * R2;
    audit.pass = audit_pass(audit.lhs, audit.rhs);
    return audit;
}

MinMaxReport audit_min_max(const TemperatureSolution& sol, double data_min, double data_max,
                           double rel_tol) {
    MinMaxReport r;
    r.min_theta = sol.min_theta;
    r.max_theta = sol.max_theta;
    r.data_min = data_min;
    r.data_max = data_max;
    r.undershoot = std::max(0.0, data_min - sol.min_theta);
    r.overshoot = std::max(0.0, sol.max_theta - data_max);
    const double range = std::max(data_max - data_min, 1e-300);
    r.pass = r.undershoot <= rel_tol * range && r.overshoot <= rel_tol * range;
    return r;
}

}  // namespace nsf
