#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>

#include "nsf/assembly.hpp"
#include "nsf/fields.hpp"

namespace nsf {

enum class LawKind { Constant, Affine, PowerLaw };

struct LawParams {
    double c0 = 0.0;         // base value
    double c1 = 0.0;         // affine slope (per K)
    double theta_ref = 300;  // reference temperature (K)
    double exponent = 0.0;   // power-law exponent
};

/// A bound-enforcing coefficient law c(x, θ). Evaluation clamps into
/// [lower, upper] and counts clamp events, so hypothesis violations are
/// observable instead of silent.
class BoundedLaw {
  public:
    BoundedLaw() : BoundedLaw(LawKind::Constant, {}, 0.0, 0.0) {}
    BoundedLaw(LawKind kind, LawParams params, double lower, double upper,
               std::function<double(const Vec2&)> spatial = {});

    double operator()(const Vec2& x, double theta) const;

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    long clamp_events() const { return clamps_->load(); }
    void reset_clamp_events() const { clamps_->store(0); }

    Coefficient as_coefficient() const {
        BoundedLaw law = *this;
        return [law](const Vec2& x, double theta) { return law(x, theta); };
    }

    static BoundedLaw constant(double value, double lower, double upper);

  private:
    LawKind kind_;
    LawParams params_;
    double lower_, upper_;
    std::function<double(const Vec2&)> spatial_;
    std::shared_ptr<std::atomic<long>> clamps_;
};

BoundedLaw make_law(LawKind kind, const LawParams& params, double lower, double upper,
                    std::function<double(const Vec2&)> spatial = {});

/// Throws when the clamp intervals rule out 2λ + μ ≥ 0 everywhere.
void check_viscosity_pair(const BoundedLaw& mu, const BoundedLaw& lambda);

/// The full coefficient set of a run: μ, λ, γ, k, h_c with their bounds.
struct CoefficientSet {
    BoundedLaw mu, lambda, gamma, k;
    BoundedLaw h_c_wall;    // Robin coefficient on the wall part (≥ h_# > 0)
    BoundedLaw h_c_outlet;  // Robin coefficient on the outlet (≥ 0 allowed)

    double mu_lo() const { return mu.lower(); }
    double mu_hi() const { return mu.upper(); }
    double lambda_hi() const { return std::max(std::abs(lambda.lower()), std::abs(lambda.upper())); }
    double gamma_lo() const { return gamma.lower(); }
    double gamma_hi() const { return gamma.upper(); }
    double k_lo() const { return k.lower(); }
    double h_hi() const { return std::max(h_c_wall.upper(), h_c_outlet.upper()); }
    double h_lo_wall() const { return h_c_wall.lower(); }
};

enum class InletProfile { Uniform, Parabolic };
enum class LiftingMode { Harmonic, ZeroOnWall };

/// Boundary data of a run. `flux` holds the nodal values of
/// g = ρ∞ u_D·n on Γ_D vertices (negative at the inlet) and 0 elsewhere;
/// `u_dirichlet` the velocity trace on Γ_D; `lifting` the interior extension ũ_D.
struct BoundaryData {
    ScalarField flux;
    VectorField u_dirichlet;
    VectorField lifting;
    double theta_in = 300.0;
    double theta_wall = 300.0;
    double theta_out = 300.0;
    double rho_inf = 1.184;
    double rho0 = 1.184;         // stagnation density at STP
    double R_specific = 287.0;   // J/(kg K)
    double c_v = 717.5;          // J/(kg K), diatomic: (5/2) R_specific

    double theta0_min() const { return std::min({theta_in, theta_wall, theta_out}); }
    double theta0_max() const { return std::max({theta_in, theta_wall, theta_out}); }
};

struct AirConstants {
    double R_specific = 287.0;
    double c_v = 717.5;
    double rho0 = 1.184;
    double mu = 3.8e-5;    // 2 x dynamic viscosity at 300 K
    double k = 2.6e-2;     // thermal conductivity at 300 K
    double lambda() const { return 0.8 * (mu / 2.0) - mu / 2.0; }  // from bulk viscosity 0.8 μ/2
};

AirConstants default_air_constants();

/// ∫_{Γ_D} g ds with the edge quadrature; the caller decides pass/fail.
double check_compatibility(const ScalarField& g, const Mesh& mesh);

/// Builds the Dirichlet trace and flux for a channel-style domain: the chosen
/// profile on the inlet and a uniform outlet velocity scaled so the discrete
/// compatibility integral vanishes to rounding. The lifting field is left
/// empty; momentum::build_lifting fills it.
BoundaryData make_channel_boundary_data(const Mesh& mesh, InletProfile profile,
                                        double inlet_speed, double rho_inf);

}  // namespace nsf
