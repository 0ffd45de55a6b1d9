#include "nsf/coefficients.hpp"

#include <cmath>

#include "nsf/quadrature.hpp"

namespace nsf {

BoundedLaw::BoundedLaw(LawKind kind, LawParams params, double lower, double upper,
                       std::function<double(const Vec2&)> spatial)
    : kind_(kind),
      params_(params),
      lower_(lower),
      upper_(upper),
      spatial_(std::move(spatial)),
      clamps_(std::make_shared<std::atomic<long>>(0)) {
    if (!(lower <= upper))
        throw std::invalid_argument("BoundedLaw: inconsistent clamps (lower > upper)");
}

double BoundedLaw::operator()(const Vec2& x, double theta) const {
    double v = 0.0;
    switch (kind_) {
        case LawKind::Constant:
            v = params_.c0;
            break;
        case LawKind::Affine:
            v = params_.c0 + params_.c1 * (theta - params_.theta_ref);
            break;
        case LawKind::PowerLaw:
            v = params_.c0 *
                std::pow(std::max(theta, 1e-12) / params_.theta_ref, params_.exponent);
            break;
    }
    if (spatial_) v *= spatial_(x);
    if (v < lower_) {
        clamps_->fetch_add(1, std::memory_order_relaxed);
        return lower_;
    }
    if (v > upper_) {
        clamps_->fetch_add(1, std::memory_order_relaxed);
        return upper_;
    }
    return v;
}

BoundedLaw BoundedLaw::constant(double value, double lower, double upper) {
    return BoundedLaw(LawKind::Constant, {.c0 = value}, lower, upper);
}

BoundedLaw make_law(LawKind kind, const LawParams& params, double lower, double upper,
                    std::function<double(const Vec2&)> spatial) {
    return BoundedLaw(kind, params, lower, upper, std::move(spatial));
}

void check_viscosity_pair(const BoundedLaw& mu, const BoundedLaw& lambda) {
    // Best case over both clamp intervals: 2 λ_max + μ_max.
    if (2.0 * lambda.upper() + mu.upper() < 0.0)
        throw std::invalid_argument(
            "viscosity pair cannot satisfy 2λ + μ >= 0 anywhere within its clamps");
}

AirConstants default_air_constants() { return {}; }

double check_compatibility(const ScalarField& g, const Mesh& mesh) {
    double acc = 0.0;
    for (const auto& e : mesh.boundary_edges()) {
        if (e.tag == BoundaryTag::Wall) continue;
        // g is P1 on the edge; the 2-point rule integrates it exactly.
        const double len = mesh.edge_length(e);
        for (const auto& qp : edge_rule())
            acc += len * qp.weight * ((1.0 - qp.s) * g.values[e.a] + qp.s * g.values[e.b]);
    }
    return acc;
}

BoundaryData make_channel_boundary_data(const Mesh& mesh, InletProfile profile,
                                        double inlet_speed, double rho_inf) {
    BoundaryData bd;
    bd.flux = ScalarField(mesh);
    bd.u_dirichlet = VectorField(mesh);
    bd.rho_inf = rho_inf;

    // Inlet span along y (the built-in channel has the inlet on the left).
    double ylo = 1e300, yhi = -1e300;
    for (int v : mesh.vertices_on({BoundaryTag::Inlet})) {
        ylo = std::min(ylo, mesh.vertex(v).y);
        yhi = std::max(yhi, mesh.vertex(v).y);
    }
    const double span = yhi - ylo;

    for (int v : mesh.vertices_on({BoundaryTag::Inlet})) {
        const double s = span > 0 ? (mesh.vertex(v).y - ylo) / span : 0.5;
        const double speed =
            profile == InletProfile::Parabolic ? inlet_speed * 4.0 * s * (1.0 - s) : inlet_speed;
        bd.u_dirichlet.set(v, {speed, 0.0});
        bd.flux[v] = -rho_inf * speed;  // u_D·n < 0 at the inlet
    }

    // Uniform outlet velocity balancing the discrete inlet flux exactly.
    double inlet_flux = 0.0;
    for (const auto& e : mesh.boundary_edges()) {
        if (e.tag != BoundaryTag::Inlet) continue;
        inlet_flux += mesh.edge_length(e) * 0.5 * (bd.flux[e.a] + bd.flux[e.b]);
    }
    const double outlet_len = boundary_measure(mesh, BoundaryTag::Outlet);
    const double u_out = -inlet_flux / (rho_inf * outlet_len);
    for (int v : mesh.vertices_on({BoundaryTag::Outlet})) {
        bd.u_dirichlet.set(v, {u_out, 0.0});
        bd.flux[v] = rho_inf * u_out;
    }
    return bd;
}

}  // namespace nsf
