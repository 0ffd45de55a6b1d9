#pragma once

#include "nsf/coefficients.hpp"
#include "nsf/report.hpp"
#include "nsf/solve.hpp"

namespace nsf {

/// Slip handling on interleaved vector dofs: a global orthogonal change of
/// basis T rotating each wall vertex into (tangent, normal) coordinates, plus
/// the Dirichlet list in rotated coordinates. Γ_D dofs take precedence over
/// the wall constraint (both components prescribed).
struct SlipConstraints {
    SparseMat rotation;                          // x = T x̃
    std::vector<std::pair<int, double>> dirichlet;  // rotated dofs
    std::vector<int> double_constrained;         // wall corner vertices, both dofs pinned
};

/// `dirichlet_values`, when given, prescribes u_D on Γ_D vertices; otherwise
/// Γ_D dofs are pinned to zero (the test space V).
SlipConstraints build_slip_constraints(const Mesh& mesh,
                                       const VectorField* dirichlet_values = nullptr);

/// Rotates, constrains and wraps a vector-dof operator for solve().
SparseSystem apply_slip_constraints(const SlipConstraints& sc, const SparseMat& matrix,
                                    const Eigen::VectorXd& rhs);

/// Builds ũ_D: harmonic extension of u_D with a slip wall (Harmonic) or with
/// the whole trace pinned to zero on the wall (ZeroOnWall).
VectorField build_lifting(const Mesh& mesh, const BoundaryData& bd, LiftingMode mode);

struct MomentumProblem {
    const Mesh* mesh = nullptr;
    VectorField m;       // momentum iterate (kg/(m² s))
    ScalarField xi;      // temperature iterate (K), feeds the coefficient laws
    ScalarField pi;      // pressure iterate (Pa)
    const CoefficientSet* coeffs = nullptr;
    const BoundaryData* boundary = nullptr;
    double exponent_q = 3.0;  // L^q norm for m in the cotau audit, q > 2
};

struct MomentumSolution {
    VectorField w;   // auxiliary velocity, zero on Γ_D, slip on Γ
    VectorField u;   // w + ũ_D
    double v_norm = 0.0;
    EstimateAudit audit;
};

MomentumSolution solve_momentum(const MomentumProblem& problem, const SolveOptions& opts = {});

/// Prop of the energy bound: LHS = min{μ_#/2, γ_#}·‖w‖_V²,
/// RHS = (2/μ_#)(‖π‖₂ + ‖m‖_q‖ũ_D‖_p + μ^#‖Dũ_D‖₂ + λ^#‖∇·ũ_D‖₂)² + γ^#‖ũ_D‖²_{2,Γ}
/// with 1/p = 1/2 − 1/q. When pressure_bound ≥ 0 it replaces ‖π‖₂ (the
/// R₄|Ω|^{1/2−1/r} form); both variants are reported by callers that have R₄.
EstimateAudit audit_momentum_estimate(const MomentumSolution& sol, const MomentumProblem& problem,
                                      double pressure_bound = -1.0);

}  // namespace nsf
