#pragma once

#include "nsf/density.hpp"
#include "nsf/momentum.hpp"
#include "nsf/temperature.hpp"

namespace nsf {

/// One iterate of the segregated map: momentum m, temperature ξ, pressure π.
struct FieldState {
    VectorField m;   // kg/(m² s)
    ScalarField xi;  // K
    ScalarField pi;  // Pa
};

/// m = 0, ξ ≡ θ_in, π ≡ ρ₀ R θ_in — the fixed point of the zero-data problem.
FieldState initial_state(const Mesh& mesh, const BoundaryData& bd);

/// Clamp at level M: z on [0, M], M otherwise (including z < 0; density is
/// nonnegative by construction so the negative branch is unreachable in the
/// pipeline, but the convention is fixed here once).
double truncate(double z, double M);

struct RunParameters {
    double exponent_q = 3.0;   // momentum norm, q > 2
    double exponent_p = 5.0;   // lifting norm; ties r = 2p/(p−4)
    double exponent_r = 10.0;  // pressure norm
    double truncation_M = 11.84;
    double damping = 0.5;      // α ∈ (0,1]
    double tol = 1e-8;
    int max_iter = 100;
    double eps_stag = -1.0;   // < 0: auto, 1e-6 × mean speed over Ω
    double eps_align = 1e-8;
    AdvectionScheme scheme = AdvectionScheme::Centered;
    SolveOptions solve;
};

/// Everything a single application of the map produces besides the new iterate.
struct DerivedFields {
    VectorField w;  // auxiliary velocity (zero trace on the in/outflow)
    VectorField u;  // w + lifting
    ScalarPotential potential;
    DensityField rho;
    TemperatureSolution temperature;
    std::vector<double> p_qp;  // truncated pressure at quadrature points
    ScalarField p_nodal;       // L² projection of p_qp
    double truncation_fraction = 0.0;  // |{ρ > M}| / |Ω|
};

struct ApplyResult {
    FieldState next;
    DerivedFields derived;
    IterationRecord record;
};

/// The operator: momentum solve from the OLD (m, ξ, π); temperature from the
/// OLD (m, ξ); density from the NEW u; then (ρu, θ, T_M(ρ)Rθ) projected to P1.
ApplyResult apply_map(const FieldState& state, const Mesh& mesh, const CoefficientSet& coeffs,
                      const BoundaryData& bd, const RunParameters& params);

class DivergenceError : public std::runtime_error {
  public:
    DivergenceError(const std::string& what, IterationReport history)
        : std::runtime_error(what), report(std::move(history)) {}
    IterationReport report;
};

struct IterateResult {
    FieldState state;
    DerivedFields derived;
    IterationReport report;
};

/// Damped Picard s ← (1−α)s + α·map(s). Stops when the three relative
/// fixed-point residual norms (L^q for m, H¹-type for ξ, L^r for π) fall
/// below tol; flags non-convergence at max_iter; throws DivergenceError when
/// an iterate norm exceeds 1e6 × its initial scale.
IterateResult iterate(FieldState initial, const Mesh& mesh, const CoefficientSet& coeffs,
                      const BoundaryData& bd, const RunParameters& params);

/// Invariant-set radii: R₂ for the temperature norm, R₃ = M|Ω|^{1/r}·R·sup θ₀
/// for the pressure norm, and the monitored momentum ratio.
double pressure_radius_R3(const Mesh& mesh, const BoundaryData& bd, double M, double r);
std::vector<EstimateAudit> check_radii(const DerivedFields& derived, const Mesh& mesh,
                                       const CoefficientSet& coeffs, const BoundaryData& bd,
                                       const RunParameters& params);

struct SweepEntry {
    double M = 0.0;
    bool converged = false;
    int iterations = 0;
    double max_rho = 0.0;
    double truncation_fraction = 0.0;
    double rho_r_norm = 0.0;  // ‖ρ‖_r, the plateau proxy for the density bound
    double diff_m = 0.0;      // update norms vs the previous sweep entry
    double diff_xi = 0.0;
    double diff_pi = 0.0;
    double pressure_identity_error = 0.0;  // max rel |p_M − ρRθ| at quad points
    EstimateAudit velocity_audit;          // energy bound with the ‖ρ‖_r pressure radius
};

/// Runs iterate() for each ascending M and reports truncation invariance:
/// once max ρ < M the entries coincide and p_M = ρRθ pointwise.
std::vector<SweepEntry> m_sweep(const Mesh& mesh, const CoefficientSet& coeffs,
                                const BoundaryData& bd, const RunParameters& params,
                                const std::vector<double>& m_list);

}  // namespace nsf
