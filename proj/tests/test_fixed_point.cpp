#include <cmath>
#include <random>

#include "doctest.h"
#include "nsf/config.hpp"
#include "nsf/fixed_point.hpp"

using namespace nsf;

TEST_CASE("truncation branches") {
    CHECK(truncate(3.0, 5.0) == 3.0);
    CHECK(truncate(7.0, 5.0) == 5.0);
    CHECK(truncate(5.0, 5.0) == 5.0);
    CHECK(truncate(0.0, 5.0) == 0.0);
    // negative input takes the clamp branch by convention
    CHECK(truncate(-1.0, 5.0) == 5.0);
}

TEST_CASE("truncation is monotone in the level") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> z(0.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        const double v = z(rng);
        double m1 = z(rng), m2 = z(rng);
        if (m1 > m2) std::swap(m1, m2);
        if (m1 == 0.0) m1 = 0.5;
        CHECK(truncate(v, m1) <= truncate(v, m2));
    }
}

TEST_CASE("pressure radius arithmetic") {
    Mesh mesh = build_rectangle_channel(1.0, 0.25, 4, 1);  // |Ω| = 0.25
    BoundaryData bd;
    bd.theta_in = 300.0;
    bd.theta_wall = 350.0;
    bd.theta_out = 300.0;
    const double r3 = pressure_radius_R3(mesh, bd, 10.0, 5.0);
    const double expected = 10.0 * std::pow(0.25, 0.2) * 287.0 * 350.0;
    CHECK(r3 == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("initial state is the zero-data fixed point") {
    Mesh mesh = build_rectangle_channel(1.0, 0.25, 8, 2);
    BoundaryData bd;
    bd.flux = ScalarField(mesh, 0.0);
    bd.u_dirichlet = VectorField(mesh);
    bd.lifting = VectorField(mesh);
    FieldState s = initial_state(mesh, bd);
    CHECK(s.m.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.xi.values.minCoeff() == 300.0);
    CHECK(s.xi.values.maxCoeff() == 300.0);
    CHECK(s.pi.values.minCoeff() == doctest::Approx(1.184 * 287.0 * 300.0).epsilon(1e-14));
}

TEST_CASE("zero data converges in one iteration") {
    RunConfig cfg = default_channel_config();
    cfg.boundary.inlet_speed = 0.0;
    cfg.geometry.nx = 8;
    cfg.geometry.ny = 2;
    Mesh mesh = build_mesh(cfg.geometry);
    CoefficientSet cs = build_coefficients(cfg);
    BoundaryData bd = build_boundary(cfg, mesh);
    RunParameters params = build_parameters(cfg);

    IterateResult res = iterate(initial_state(mesh, bd), mesh, cs, bd, params);
    CHECK(res.report.converged);
    CHECK(res.report.history.size() == 1);
    // θ ≡ θ_in, π ≡ ρ₀Rθ_in, m ≡ 0
    CHECK(res.state.m.values.cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < mesh.vertex_count(); ++i) {
        CHECK(res.state.xi[i] == doctest::Approx(bd.theta_in).epsilon(1e-10));
        CHECK(res.state.pi[i] ==
              doctest::Approx(bd.rho0 * bd.R_specific * bd.theta_in).epsilon(1e-9));
    }

    // damping consistency: a fixed point stays fixed for any damping factor
    params.damping = 0.25;
    IterateResult res2 = iterate(initial_state(mesh, bd), mesh, cs, bd, params);
    CHECK(res2.report.converged);
    CHECK(res2.report.history.size() == 1);
}

TEST_CASE("apply_map is deterministic") {
    RunConfig cfg = default_channel_config();
    cfg.geometry.nx = 8;
    cfg.geometry.ny = 2;
    Mesh mesh = build_mesh(cfg.geometry);
    CoefficientSet cs = build_coefficients(cfg);
    BoundaryData bd = build_boundary(cfg, mesh);
    RunParameters params = build_parameters(cfg);
    FieldState s = initial_state(mesh, bd);
    ApplyResult a = apply_map(s, mesh, cs, bd, params);
    ApplyResult b = apply_map(s, mesh, cs, bd, params);
    CHECK((a.next.m.values - b.next.m.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.next.xi.values - b.next.xi.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.next.pi.values - b.next.pi.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("baseline iteration converges with passing audits") {
    RunConfig cfg = default_channel_config();
    cfg.geometry.nx = 16;
    cfg.geometry.ny = 4;
    Mesh mesh = build_mesh(cfg.geometry);
    CoefficientSet cs = build_coefficients(cfg);
    BoundaryData bd = build_boundary(cfg, mesh);
    RunParameters params = build_parameters(cfg);

    IterateResult res = iterate(initial_state(mesh, bd), mesh, cs, bd, params);
    REQUIRE(res.report.converged);
    CHECK(res.report.all_asserted_audits_pass());
    // every row carries the full audit set
    for (const auto& row : res.report.history) {
        CHECK(row.audits.size() >= 5);
        CHECK(row.max_rho >= 0.0);
        CHECK(row.theta_norm <= row.radius_R2 * (1.0 + 1e-8));
        CHECK(row.pressure_norm <= row.radius_R3 * (1.0 + 1e-8));
    }
}

TEST_CASE("truncation sweep shows invariance above the density peak") {
    RunConfig cfg = default_channel_config();
    cfg.geometry.nx = 16;
    cfg.geometry.ny = 4;
    Mesh mesh = build_mesh(cfg.geometry);
    CoefficientSet cs = build_coefficients(cfg);
    BoundaryData bd = build_boundary(cfg, mesh);
    RunParameters params = build_parameters(cfg);

    const double rho0 = bd.rho0;
    std::vector<SweepEntry> entries =
        m_sweep(mesh, cs, bd, params, {2.0 * rho0, 10.0 * rho0, 100.0 * rho0});
    REQUIRE(entries.size() == 3);
    for (size_t i = 1; i < entries.size(); ++i) {
        const SweepEntry& prev = entries[i - 1];
        const SweepEntry& cur = entries[i];
        REQUIRE(cur.converged);
        if (prev.max_rho < prev.M) {
            CHECK(cur.diff_m <= 1e-8);
            CHECK(cur.diff_xi <= 1e-8);
            CHECK(cur.diff_pi <= 1e-8);
            CHECK(cur.truncation_fraction == 0.0);
            CHECK(cur.pressure_identity_error <= 1e-12);
        }
    }
}
