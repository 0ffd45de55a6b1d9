#pragma once

#include "nsf/coefficients.hpp"
#include "nsf/report.hpp"
#include "nsf/solve.hpp"

namespace nsf {

enum class AdvectionScheme { Centered, Upwind };

struct TemperatureProblem {
    const Mesh* mesh = nullptr;
    VectorField m;    // momentum iterate
    ScalarField xi;   // temperature iterate, feeds k(ξ), h_c(ξ)
    const CoefficientSet* coeffs = nullptr;
    const BoundaryData* boundary = nullptr;
    AdvectionScheme scheme = AdvectionScheme::Centered;
};

struct TemperatureSolution {
    ScalarField theta;       // K
    ScalarField internal_energy;  // e = c_v θ
    double energy_norm = 0.0;     // (‖∇θ‖² + ‖θ‖²_{2,Γ})^{1/2}
    double min_theta = 0.0;
    double max_theta = 0.0;
    EstimateAudit audit;
};

/// Solves the Dirichlet–Robin problem in the shifted unknown θ − θ_in, so a
/// single constant boundary datum reproduces the constant solution exactly.
TemperatureSolution solve_temperature(const TemperatureProblem& problem,
                                      const SolveOptions& opts = {});

/// Energy bound: ‖∇θ‖² + ‖θ‖²_{2,Γ} ≤ (h^#/min{2k_#, h_#})‖θ_in + θ_e‖²_{2,Γ_N} =: R₂².
EstimateAudit audit_temperature_estimate(const TemperatureSolution& sol,
                                         const TemperatureProblem& problem);
double temperature_radius_R2(const Mesh& mesh, const CoefficientSet& coeffs,
                             const BoundaryData& bd);

struct MinMaxReport {
    double min_theta = 0.0, max_theta = 0.0;
    double data_min = 0.0, data_max = 0.0;
    double undershoot = 0.0, overshoot = 0.0;
    bool pass = true;
};

/// Nodal min/max against the boundary-data range; tolerance is relative to
/// the data range (tight for the monotone/upwind option).
MinMaxReport audit_min_max(const TemperatureSolution& sol, double data_min, double data_max,
                           double rel_tol);

}  // namespace nsf
