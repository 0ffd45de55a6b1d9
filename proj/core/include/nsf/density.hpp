#pragma once

#include "nsf/coefficients.hpp"
#include "nsf/report.hpp"
#include "nsf/solve.hpp"

namespace nsf {

/// Scalar potential of the Neumann–Laplace problem: ∆ψ = 0, ∂ψ/∂n = g on Γ_D,
/// ∂ψ/∂n = 0 on Γ, normalized to zero mean.
struct ScalarPotential {
    ScalarField psi;
    ScalarField flux;  // the Neumann datum g (nodal, supported on Γ_D)
};

class CompatibilityError : public std::runtime_error {
  public:
    explicit CompatibilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Refuses to solve when |∫_{Γ_D} g ds| > rel_tol · ‖g‖_{1,Γ_D} (the continuous
/// pure-Neumann problem is unsolvable without the compatibility condition).
ScalarPotential solve_scalar_potential(const Mesh& mesh, const ScalarField& g,
                                       double rel_tol = 1e-10, const SolveOptions& opts = {});

enum class DensityCase : std::uint8_t { Stagnation = 0, Aligned = 1, Corrected = 2 };

/// Density at the triangle quadrature points (index 3t+k), plus the correction
/// potential and a nodal P1 projection for output only.
struct DensityField {
    const Mesh* mesh = nullptr;
    std::vector<double> rho;          // ≥ 0, per quadrature point
    std::vector<DensityCase> cases;   // per quadrature point
    ScalarField phi;                  // Neumann–Poisson correction (zero mean)
    ScalarField nodal;                // L² projection, visualization only
    long alignment_anomalies = 0;     // aligned points with ∇ψ·u < 0
    double max_rho = 0.0;

    int point_count() const { return static_cast<int>(rho.size()); }
};

/// Case split per quadrature point: stagnation (|u| ≤ ε_stag) → ρ₀; aligned
/// (rejection below ε_align) → |∇ψ|/|u|; otherwise the global Neumann–Poisson
/// correction with the clamped ρ₂ branch.
DensityField recover_density(const VectorField& u, const ScalarPotential& potential, double rho0,
                             double eps_stag, double eps_align, const SolveOptions& opts = {});

struct ContinuityResidual {
    double residual_l2 = 0.0;    // ‖r‖₂ over the P1 dual basis
    double flux_scale = 0.0;     // ‖g‖_{2,Γ_D}
    double normalized = 0.0;     // residual_l2 / max(flux_scale, tiny)
};

/// Residual of ∫ ρu·∇v − ∫_{Γ_D} g v over all P1 test functions.
ContinuityResidual verify_weak_continuity(const DensityField& rho, const VectorField& u,
                                          const ScalarField& g, const Mesh& mesh);

/// Monitored ratio ‖ρu‖_{q,Ω}/‖g‖_{q,∂Ω} (proxy for the 3C_q constant; C_q is
/// not known numerically, so this entry never asserts).
EstimateAudit audit_momentum_norm(const DensityField& rho, const VectorField& u,
                                  const ScalarField& g, double q);

/// L^q norm of the quadrature-point momentum ρu.
double momentum_lq_norm(const DensityField& rho, const VectorField& u, double q);
/// L^r norm of the quadrature-point density.
double density_lr_norm(const DensityField& rho, double r);

/// L² projection of quadrature-point data onto P1 (scalar / vector versions).
ScalarField project_to_p1(const Mesh& mesh, const std::vector<double>& qp_values);
VectorField project_to_p1_vector(const Mesh& mesh, const std::vector<Vec2>& qp_values);

}  // namespace nsf
