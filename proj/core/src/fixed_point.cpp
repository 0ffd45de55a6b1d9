#include "nsf/fixed_point.hpp"

#include <cmath>

#include "nsf/quadrature.hpp"

namespace nsf {

namespace {

double qp_lr_norm(const Mesh& mesh, const std::vector<double>& qp, double r) {
    const auto& rule = triangle_rule();
    double acc = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k)
            acc += rule[k].weight * mesh.triangle_area(t) * std::pow(std::abs(qp[3 * t + k]), r);
    return std::pow(acc, 1.0 / r);
}

double relative(double diff, double a, double b) {
    const double denom = std::max(a, b);
    return denom > 0.0 ? diff / denom : 0.0;
}

long total_clamp_events(const CoefficientSet& cs) {
    return cs.mu.clamp_events() + cs.lambda.clamp_events() + cs.gamma.clamp_events() +
           cs.k.clamp_events() + cs.h_c_wall.clamp_events() + cs.h_c_outlet.clamp_events();
}

}  // namespace

FieldState initial_state(const Mesh& mesh, const BoundaryData& bd) {
    FieldState s;
    s.m = VectorField(mesh);
    s.xi = ScalarField(mesh, bd.theta_in);
    s.pi = ScalarField(mesh, bd.rho0 * bd.R_specific * bd.theta_in);
    return s;
}

double truncate(double z, double M) { return (z >= 0.0 && z <= M) ? z : M; }

double pressure_radius_R3(const Mesh& mesh, const BoundaryData& bd, double M, double r) {
    return M * std::pow(mesh.total_area(), 1.0 / r) * bd.R_specific * bd.theta0_max();
}

std::vector<EstimateAudit> check_radii(const DerivedFields& derived, const Mesh& mesh,
                                       const CoefficientSet& coeffs, const BoundaryData& bd,
                                       const RunParameters& params) {
    std::vector<EstimateAudit> audits;
    audits.push_back(derived.temperature.audit);

    EstimateAudit pm;
    pm.name = "cotapm";
    pm.lhs = qp_lr_norm(mesh, derived.p_qp, params.exponent_r);
    pm.rhs = pressure_radius_R3(mesh, bd, params.truncation_M, params.exponent_r);
    pm.pass = audit_pass(pm.lhs, pm.rhs);
    audits.push_back(pm);

    audits.push_back(audit_momentum_norm(derived.rho, derived.u, bd.flux, params.exponent_q));
    (void)coeffs;
    return audits;
}

ApplyResult apply_map(const FieldState& state, const Mesh& mesh, const CoefficientSet& coeffs,
                      const BoundaryData& bd, const RunParameters& params) {
    const long clamps_before = total_clamp_events(coeffs);
    ApplyResult out;

    MomentumProblem mp;
    mp.mesh = &mesh;
    mp.m = state.m;
    mp.xi = state.xi;
    mp.pi = state.pi;
    mp.coeffs = &coeffs;
    mp.boundary = &bd;
    mp.exponent_q = params.exponent_q;
    MomentumSolution msol;
    try {
        msol = solve_momentum(mp, params.solve);
    } catch (const std::exception& e) {
        throw SolveError(std::string("momentum stage: ") + e.what());
    }
    out.derived.w = msol.w;
    out.derived.u = msol.u;

    try {
        out.derived.potential = solve_scalar_potential(mesh, bd.flux, 1e-10, params.solve);
        const double eps_stag =
            params.eps_stag >= 0.0
                ? params.eps_stag
                : 1e-6 * lq_norm(out.derived.u, 1.0) / mesh.total_area();
        out.derived.rho = recover_density(out.derived.u, out.derived.potential, bd.rho0,
                                          eps_stag, params.eps_align, params.solve);
    } catch (const std::exception& e) {
        throw SolveError(std::string("density stage: ") + e.what());
    }

    TemperatureProblem tp;
    tp.mesh = &mesh;
    tp.m = state.m;
    tp.xi = state.xi;
    tp.coeffs = &coeffs;
    tp.boundary = &bd;
    tp.scheme = params.scheme;
    try {
        out.derived.temperature = solve_temperature(tp, params.solve);
    } catch (const std::exception& e) {
        throw SolveError(std::string("temperature stage: ") + e.what());
    }

    // Quadrature-point momentum and truncated pressure; P1 projections feed
    // the next iterate.
    const auto& rule = triangle_rule();
    const int npts = 3 * mesh.triangle_count();
    std::vector<Vec2> mq(npts);
    out.derived.p_qp.assign(npts, 0.0);
    double active_area = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int idx = 3 * t + k;
            const double rho = out.derived.rho.rho[idx];
            mq[idx] = out.derived.u.eval(t, rule[k].bary) * rho;
            const double theta = out.derived.temperature.theta.eval(t, rule[k].bary);
            out.derived.p_qp[idx] = truncate(rho, params.truncation_M) * bd.R_specific * theta;
            if (rho > params.truncation_M)
                active_area += rule[k].weight * mesh.triangle_area(t);
        }
    }
    out.derived.truncation_fraction = active_area / mesh.total_area();
    out.derived.p_nodal = project_to_p1(mesh, out.derived.p_qp);

    out.next.m = project_to_p1_vector(mesh, mq);
    out.next.xi = out.derived.temperature.theta;
    out.next.pi = out.derived.p_nodal;

    out.record.continuity_residual =
        verify_weak_continuity(out.derived.rho, out.derived.u, bd.flux, mesh).normalized;
    const double gq =
        boundary_lq(bd.flux, {BoundaryTag::Inlet, BoundaryTag::Outlet}, params.exponent_q);
    const double mnorm = momentum_lq_norm(out.derived.rho, out.derived.u, params.exponent_q);
    out.record.momentum_ratio = gq > 0.0 ? mnorm / gq : 0.0;
    out.record.theta_norm = out.derived.temperature.energy_norm;
    out.record.pressure_norm = qp_lr_norm(mesh, out.derived.p_qp, params.exponent_r);
    out.record.radius_R2 = temperature_radius_R2(mesh, coeffs, bd);
    out.record.radius_R3 =
        pressure_radius_R3(mesh, bd, params.truncation_M, params.exponent_r);
    out.record.max_rho = out.derived.rho.max_rho;
    out.record.truncation_fraction = out.derived.truncation_fraction;
    out.record.clamp_events = total_clamp_events(coeffs) - clamps_before;

    out.record.audits.push_back(msol.audit);
    for (auto& a : check_radii(out.derived, mesh, coeffs, bd, params))
        out.record.audits.push_back(a);
    // Data-only variant of the velocity bound: pressure term from the measured
    // ‖ρ‖_r radius instead of the iterate's ‖π‖₂.
    const double R4 = density_lr_norm(out.derived.rho, params.exponent_r) * bd.R_specific *
                      bd.theta0_max();
    const double p_bound =
        R4 * std::pow(mesh.total_area(), 0.5 - 1.0 / params.exponent_r);
    out.record.audits.push_back(audit_momentum_estimate(msol, mp, p_bound));
    return out;
}

IterateResult iterate(FieldState initial, const Mesh& mesh, const CoefficientSet& coeffs,
                      const BoundaryData& bd, const RunParameters& params) {
    IterateResult out;
    out.state = std::move(initial);

    const double init_m = lq_norm(out.state.m, params.exponent_q);
    const double init_xi = h1_gamma_norm(out.state.xi);
    const double init_pi = lq_norm(out.state.pi, params.exponent_r);

    for (int it = 1; it <= params.max_iter; ++it) {
        ApplyResult step = apply_map(out.state, mesh, coeffs, bd, params);

        const double nm_old = lq_norm(out.state.m, params.exponent_q);
        const double nm_new = lq_norm(step.next.m, params.exponent_q);
        const double nxi_old = h1_gamma_norm(out.state.xi);
        const double nxi_new = h1_gamma_norm(step.next.xi);
        const double npi_old = lq_norm(out.state.pi, params.exponent_r);
        const double npi_new = lq_norm(step.next.pi, params.exponent_r);

        VectorField dm = step.next.m;
        dm.values -= out.state.m.values;
        ScalarField dxi = step.next.xi;
        dxi.values -= out.state.xi.values;
        ScalarField dpi = step.next.pi;
        dpi.values -= out.state.pi.values;

        step.record.iteration = it;
        step.record.dm_q = relative(lq_norm(dm, params.exponent_q), nm_old, nm_new);
        step.record.dxi_h1 = relative(h1_gamma_norm(dxi), nxi_old, nxi_new);
        step.record.dpi_r = relative(lq_norm(dpi, params.exponent_r), npi_old, npi_new);
        out.report.history.push_back(step.record);

        if (nm_new > 1e6 * (init_m + 1.0) || nxi_new > 1e6 * (init_xi + 1.0) ||
            npi_new > 1e6 * (init_pi + 1.0))
            throw DivergenceError("iterate norm exceeded 1e6 x initial scale at iteration " +
                                      std::to_string(it),
                                  out.report);

        out.derived = std::move(step.derived);
        if (step.record.dm_q <= params.tol && step.record.dxi_h1 <= params.tol &&
            step.record.dpi_r <= params.tol) {
            out.state = std::move(step.next);
            out.report.converged = true;
            return out;
        }
        const double a = params.damping;
        out.state.m.values = (1.0 - a) * out.state.m.values + a * step.next.m.values;
        out.state.xi.values = (1.0 - a) * out.state.xi.values + a * step.next.xi.values;
        out.state.pi.values = (1.0 - a) * out.state.pi.values + a * step.next.pi.values;
    }
    out.report.converged = false;
    return out;
}

std::vector<SweepEntry> m_sweep(const Mesh& mesh, const CoefficientSet& coeffs,
                                const BoundaryData& bd, const RunParameters& params,
                                const std::vector<double>& m_list) {
    std::vector<SweepEntry> entries;
    const FieldState* prev = nullptr;
    std::vector<FieldState> states;  // stable addresses for prev
    states.reserve(m_list.size());

    for (double M : m_list) {
        RunParameters p = params;
        p.truncation_M = M;
        IterateResult run = iterate(initial_state(mesh, bd), mesh, coeffs, bd, p);

        SweepEntry e;
        e.M = M;
        e.converged = run.report.converged;
        e.iterations = static_cast<int>(run.report.history.size());
        e.max_rho = run.derived.rho.max_rho;
        e.truncation_fraction = run.derived.truncation_fraction;
        e.rho_r_norm = density_lr_norm(run.derived.rho, p.exponent_r);

        const auto& rule = triangle_rule();
        for (int t = 0; t < mesh.triangle_count(); ++t)
            for (int k = 0; k < 3; ++k) {
                const int idx = 3 * t + k;
                const double exact = run.derived.rho.rho[idx] * bd.R_specific *
                                     run.derived.temperature.theta.eval(t, rule[k].bary);
                const double err = std::abs(run.derived.p_qp[idx] - exact) /
                                   std::max(std::abs(exact), 1e-300);
                e.pressure_identity_error = std::max(e.pressure_identity_error, err);
            }

        if (prev) {
            VectorField dm = run.state.m;
            dm.values -= prev->m.values;
            ScalarField dxi = run.state.xi;
            dxi.values -= prev->xi.values;
            ScalarField dpi = run.state.pi;
            dpi.values -= prev->pi.values;
            e.diff_m = relative(lq_norm(dm, p.exponent_q), lq_norm(run.state.m, p.exponent_q),
                                lq_norm(prev->m, p.exponent_q));
            e.diff_xi = relative(h1_gamma_norm(dxi), h1_gamma_norm(run.state.xi),
                                 h1_gamma_norm(prev->xi));
            e.diff_pi = relative(lq_norm(dpi, p.exponent_r), lq_norm(run.state.pi, p.exponent_r),
                                 lq_norm(prev->pi, p.exponent_r));
        }

        for (const auto& a : run.report.history.back().audits)
            if (a.name == "cotau_r4") e.velocity_audit = a;

        states.push_back(std::move(run.state));
        prev = &states.back();
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace nsf
