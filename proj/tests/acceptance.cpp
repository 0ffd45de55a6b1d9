// Acceptance checks: one line of output per criterion, nonzero exit on any
// failure. Each block is self-contained so a failure localizes immediately.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/fixed_point.hpp"
#include "nsf/quadrature.hpp"

using namespace nsf;

namespace {

int failures = 0;

void report(int criterion, bool pass, const char* label, const std::string& detail) {
    std::printf("%s  criterion %2d  %-32s %s\n", pass ? "PASS" : "FAIL", criterion, label,
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

CoefficientSet constant_coeffs(double mu, double lambda, double gamma, double k, double h_wall,
                               double h_out) {
    CoefficientSet cs;
    cs.mu = BoundedLaw::constant(mu, mu, mu);
    cs.lambda = BoundedLaw::constant(lambda, lambda, lambda);
    cs.gamma = BoundedLaw::constant(gamma, gamma, gamma);
    cs.k = BoundedLaw::constant(k, k, k);
    cs.h_c_wall = BoundedLaw::constant(h_wall, h_wall, h_wall);
    cs.h_c_outlet = BoundedLaw::constant(h_out, h_out, h_out);
    return cs;
}

struct BaselineRun {
    Mesh mesh;
    IterateResult result;
    double momentum_ratio = 0.0;
    double continuity_residual = 0.0;
};

BaselineRun run_baseline(int nx, int ny) {
    RunConfig cfg = default_channel_config();
    cfg.geometry.nx = nx;
    cfg.geometry.ny = ny;
    Mesh mesh = build_mesh(cfg.geometry);
    CoefficientSet cs = build_coefficients(cfg);
    BoundaryData bd = build_boundary(cfg, mesh);
    RunParameters params = build_parameters(cfg);
    IterateResult res = iterate(initial_state(mesh, bd), mesh, cs, bd, params);
    BaselineRun out{std::move(mesh), std::move(res)};
    if (!out.result.report.history.empty()) {
        out.momentum_ratio = out.result.report.history.back().momentum_ratio;
        out.continuity_residual = out.result.report.history.back().continuity_residual;
    }
    return out;
}

Mesh perturbed_unit_square(int n, unsigned seed) {
    // crossed structured meshes solve quadratic harmonics exactly; jiggle the
    // interior so the genuine O(h^2) error is visible
    const Mesh base = build_rectangle_channel(1.0, 1.0, n, n);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jiggle(-0.15 / n, 0.15 / n);
    std::vector<Vec2> verts = base.vertices();
    for (int v = 0; v < base.vertex_count(); ++v) {
        const bool boundary = base.vertex_on_tag(v, BoundaryTag::Inlet) ||
                              base.vertex_on_tag(v, BoundaryTag::Outlet) ||
                              base.vertex_on_tag(v, BoundaryTag::Wall);
        if (!boundary) verts[v] = verts[v] + Vec2{jiggle(rng), jiggle(rng)};
    }
    return Mesh(verts, base.triangles(), base.boundary_edges());
}

void criterion_1_skew_symmetry() {
    Mesh mesh = build_rectangle_channel(1.0, 0.25, 32, 8);
    ScalarField zero_g(mesh, 0.0);
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        VectorField m(mesh);
        for (int i = 0; i < m.values.size(); ++i) m.values[i] = u(rng);
        ScalarField v(mesh);
        for (int i = 0; i < mesh.vertex_count(); ++i) v[i] = u(rng);
        SparseMat a = assemble_advection_skew(mesh, m, zero_g);
        const double h1 = h1_seminorm(v) * h1_seminorm(v) + l2_norm(v) * l2_norm(v);
        const double scale = m.values.cwiseAbs().maxCoeff() * h1;
        worst = std::max(worst, std::abs(v.values.dot(a * v.values)) / scale);
    }
    report(1, worst <= 1e-12, "advective skew-symmetry", "max |b(v,v)|/scale = " + fmt(worst));
}

void criterion_2_momentum_estimate() {
    int passed = 0, total = 0;
    std::string detail;

    auto check = [&](const Mesh& mesh, const CoefficientSet& cs, const BoundaryData& bd,
                     const VectorField& m, const ScalarField& pi) {
        MomentumProblem mp;
        mp.mesh = &mesh;
        mp.m = m;
        mp.xi = ScalarField(mesh, 300.0);
        mp.pi = pi;
        mp.coeffs = &cs;
        mp.boundary = &bd;
        MomentumSolution sol = solve_momentum(mp);
        ++total;
        if (sol.audit.pass) ++passed;
    };

    {
        RunConfig cfg = default_channel_config();
        cfg.geometry.nx = 16;
        cfg.geometry.ny = 4;
        Mesh mesh = build_mesh(cfg.geometry);
        CoefficientSet cs = build_coefficients(cfg);
        BoundaryData bd = build_boundary(cfg, mesh);
        check(mesh, cs, bd, VectorField(mesh),
              ScalarField(mesh, bd.rho0 * bd.R_specific * bd.theta_in));
    }

    Mesh mesh = build_rectangle_channel(1.0, 0.25, 16, 4);
    std::mt19937 rng(202);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const double mu = std::pow(10.0, logu(rng));
        const double gamma = std::pow(10.0, logu(rng));
        CoefficientSet cs = constant_coeffs(mu, -0.2 * mu, gamma, 1.0, 1.0, 1.0);
        BoundaryData bd = make_channel_boundary_data(mesh, InletProfile::Parabolic,
                                                     std::pow(10.0, logu(rng)), 1.184);
        bd.lifting = build_lifting(mesh, bd, LiftingMode::Harmonic);
        VectorField m(mesh);
        const double mscale = std::pow(10.0, logu(rng));
        for (int i = 0; i < m.values.size(); ++i) m.values[i] = mscale * unit(rng);
        ScalarField pi(mesh);
        const double piscale = std::pow(10.0, 2.0 + logu(rng));
        for (int i = 0; i < mesh.vertex_count(); ++i) pi[i] = piscale * (1.0 + unit(rng));
        check(mesh, cs, bd, m, pi);
    }
    report(2, passed == total, "momentum energy estimate",
           std::to_string(passed) + "/" + std::to_string(total) + " audits pass");
}

void criterion_3_temperature_estimate() {
    int passed = 0, total = 0;
    Mesh mesh = build_rectangle_channel(1.0, 0.25, 16, 4);
    std::mt19937 rng(303);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    std::uniform_real_distribution<double> temp(200.0, 400.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    auto check = [&](const CoefficientSet& cs, const BoundaryData& bd, const VectorField& m) {
        TemperatureProblem tp;
        tp.mesh = &mesh;
        tp.m = m;
        tp.xi = ScalarField(mesh, bd.theta_in);
        tp.coeffs = &cs;
        tp.boundary = &bd;
        TemperatureSolution sol = solve_temperature(tp);
        ++total;
        if (sol.audit.pass) ++passed;
    };

    {
        RunConfig cfg = default_channel_config();
        CoefficientSet cs = build_coefficients(cfg);
        BoundaryData bd = build_boundary(cfg, mesh);
        check(cs, bd, VectorField(mesh));
    }
    for (int rep = 0; rep < 20; ++rep) {
        const double k = std::pow(10.0, logu(rng));
        const double h = std::pow(10.0, logu(rng));
        CoefficientSet cs = constant_coeffs(1.0, 0.0, 1.0, k, h, h);
        BoundaryData bd = make_channel_boundary_data(mesh, InletProfile::Parabolic,
                                                     std::pow(10.0, logu(rng)), 1.184);
        bd.theta_in = temp(rng);
        bd.theta_wall = temp(rng);
        bd.theta_out = temp(rng);
        VectorField m(mesh);
        const double mscale = std::pow(10.0, logu(rng));
        for (int i = 0; i < m.values.size(); ++i) m.values[i] = mscale * unit(rng);
        check(cs, bd, m);
    }
    report(3, passed == total, "temperature energy estimate",
           std::to_string(passed) + "/" + std::to_string(total) + " audits pass");
}

void criterion_4_min_max() {
    Mesh mesh = build_rectangle_channel(1.0, 0.25, 32, 8);
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> temp(250.0, 400.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    CoefficientSet cs = constant_coeffs(1.0, 0.0, 1.0, 2.6e-2, 5.0, 5.0);

    int passed = 0, total = 0;
    double centered_overshoot = 0.0;
    for (int rep = 0; rep < 11; ++rep) {
        BoundaryData bd;
        bd.flux = ScalarField(mesh, 0.0);
        bd.u_dirichlet = VectorField(mesh);
        bd.lifting = VectorField(mesh);
        if (rep == 0) {
            bd.theta_in = 300.0;
            bd.theta_wall = 350.0;
            bd.theta_out = 300.0;
        } else {
            bd.theta_in = temp(rng);
            bd.theta_wall = temp(rng);
            bd.theta_out = temp(rng);
        }
        VectorField m(mesh);
        for (int i = 0; i < m.values.size(); ++i) m.values[i] = 0.5 * unit(rng);

        TemperatureProblem tp;
        tp.mesh = &mesh;
        tp.m = m;
        tp.xi = ScalarField(mesh, bd.theta_in);
        tp.coeffs = &cs;
        tp.boundary = &bd;
        tp.scheme = AdvectionScheme::Upwind;
        TemperatureSolution sol = solve_temperature(tp);
        MinMaxReport mm = audit_min_max(sol, bd.theta0_min(), bd.theta0_max(), 1e-12);
        ++total;
        if (mm.pass) ++passed;

        // centered scheme with a smooth axial momentum at mesh Peclet 10:
        // overshoot is reported, not asserted
        const double h = 1.0 / 32.0;
        const double m10 = 10.0 * 2.0 * 2.6e-2 / (717.5 * h);
        tp.m = VectorField(mesh, {m10, 0.0});
        tp.scheme = AdvectionScheme::Centered;
        TemperatureSolution solc = solve_temperature(tp);
        MinMaxReport mmc = audit_min_max(solc, bd.theta0_min(), bd.theta0_max(), 0.05);
        const double range = std::max(bd.theta0_max() - bd.theta0_min(), 1e-300);
        centered_overshoot =
            std::max(centered_overshoot, std::max(mmc.overshoot, mmc.undershoot) / range);
    }
    report(4, passed == total, "upwind min-max principle",
           std::to_string(passed) + "/" + std::to_string(total) +
               " exact; centered overshoot " + fmt(centered_overshoot) + " of range (reported)");
}

void criterion_5_mms() {
    std::vector<double> hs, el2, eh1;
    for (int n : {8, 16, 32, 64}) {
        const Mesh mesh = perturbed_unit_square(n, 1234u);
        SparseSystem sys(mesh.vertex_count());
        sys.matrix = assemble_stiffness(mesh, constant_coeff(1.0));
        sys.rhs = Eigen::VectorXd::Zero(mesh.vertex_count());
        for (const auto& e : mesh.boundary_edges()) {
            const double len = mesh.edge_length(e);
            const Vec2 nrm = mesh.edge_normal(e);
            for (const auto& qp : edge_rule()) {
                const Vec2 x = mesh.vertex(e.a) * (1.0 - qp.s) + mesh.vertex(e.b) * qp.s;
                const double g = 2.0 * x.x * nrm.x - 2.0 * x.y * nrm.y;
                sys.rhs[e.a] += len * qp.weight * g * (1.0 - qp.s);
                sys.rhs[e.b] += len * qp.weight * g * qp.s;
            }
        }
        sys.mean_constraint = p1_integral_weights(mesh);
        ScalarField psi(mesh);
        psi.values = solve(sys);

        ScalarField diff(mesh);
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            const Vec2 p = mesh.vertex(v);
            diff[v] = p.x * p.x - p.y * p.y;
        }
        diff.values.array() -= mean_value(diff);
        diff.values = psi.values - diff.values;
        hs.push_back(1.0 / n);
        el2.push_back(l2_norm(diff));
        eh1.push_back(h1_seminorm(diff));
    }
    auto slope = [&](const std::vector<double>& err) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(err.size());
        for (int i = 0; i < n; ++i) {
            const double x = std::log(hs[i]), y = std::log(err[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    const double pl2 = slope(el2), ph1 = slope(eh1);
    report(5, pl2 >= 1.9 && ph1 >= 0.9, "potential MMS orders",
           "L2 " + fmt(pl2) + ", H1 " + fmt(ph1));
}

void criteria_6_and_9(const BaselineRun& a, const BaselineRun& b, const BaselineRun& c) {
    const bool decreasing = a.continuity_residual > b.continuity_residual &&
                            b.continuity_residual > c.continuity_residual;
    report(6, decreasing, "continuity residual refinement",
           fmt(a.continuity_residual) + " > " + fmt(b.continuity_residual) + " > " +
               fmt(c.continuity_residual));

    bool radii = true;
    for (const BaselineRun* run : {&a, &b, &c}) {
        if (!run->result.report.converged) radii = false;
        for (const auto& audit : run->result.report.history.back().audits)
            if (audit.asserted && !audit.pass) radii = false;
    }
    const double mean = (a.momentum_ratio + b.momentum_ratio + c.momentum_ratio) / 3.0;
    double dev = 0.0;
    for (double r : {a.momentum_ratio, b.momentum_ratio, c.momentum_ratio})
        dev = std::max(dev, std::abs(r - mean) / mean);
    report(9, radii && dev <= 0.2, "K-radius and momentum ratio",
           "radii asserted pass; ratio spread " + fmt(dev) + " of mean " + fmt(mean));
}

void criterion_7_convergence(const BaselineRun& base) {
    const auto& hist = base.result.report.history;
    bool ok = base.result.report.converged && static_cast<int>(hist.size()) <= 100;
    // strictly decreasing after iteration 3, measured on the largest of the
    // three relative update norms (components that are identically zero stay
    // zero and are covered by the max)
    std::vector<double> norms;
    for (const auto& row : hist) norms.push_back(std::max({row.dm_q, row.dxi_h1, row.dpi_r}));
    for (size_t i = 3; i + 1 < norms.size(); ++i)
        if (!(norms[i + 1] < norms[i])) ok = false;

    // zero-data configuration: one iteration
    RunConfig cfg = default_channel_config();
    cfg.boundary.inlet_speed = 0.0;
    Mesh mesh = build_mesh(cfg.geometry);
    CoefficientSet cs = build_coefficients(cfg);
    BoundaryData bd = build_boundary(cfg, mesh);
    IterateResult zero = iterate(initial_state(mesh, bd), mesh, cs, bd, build_parameters(cfg));
    const bool zero_ok = zero.report.converged && zero.report.history.size() == 1;

    report(7, ok && zero_ok, "fixed-point convergence",
           std::to_string(hist.size()) + " iterations; zero-data " +
               std::to_string(zero.report.history.size()) + " iteration");
}

void criterion_8_truncation_sweep() {
    RunConfig cfg = default_channel_config();
    Mesh mesh = build_mesh(cfg.geometry);
    CoefficientSet cs = build_coefficients(cfg);
    BoundaryData bd = build_boundary(cfg, mesh);
    RunParameters params = build_parameters(cfg);
    const double rho0 = bd.rho0;
    std::vector<SweepEntry> entries =
        m_sweep(mesh, cs, bd, params, {2.0 * rho0, 10.0 * rho0, 100.0 * rho0});

    bool ok = entries.size() == 3;
    int compared = 0;
    for (size_t i = 1; i < entries.size() && ok; ++i) {
        const SweepEntry& prev = entries[i - 1];
        const SweepEntry& cur = entries[i];
        if (!cur.converged) ok = false;
        if (prev.max_rho < prev.M) {
            ++compared;
            if (cur.diff_m > 1e-8 || cur.diff_xi > 1e-8 || cur.diff_pi > 1e-8) ok = false;
            if (cur.truncation_fraction != 0.0) ok = false;
            if (cur.pressure_identity_error > 1e-12) ok = false;
        }
    }
    report(8, ok && compared >= 1, "truncation invariance",
           std::to_string(compared) + " consecutive-M comparisons; max rho " +
               fmt(entries.empty() ? 0.0 : entries.back().max_rho));
}

void criterion_10_dense_oracles() {
    bool ok = true;
    std::string detail;

    {  // momentum on the 2x1 channel, zero lifting, pressure x
        Mesh mesh = build_rectangle_channel(1.0, 0.25, 2, 1);
        const double mu = 1.0, lambda = 0.3, gamma = 2.0;
        CoefficientSet cs = constant_coeffs(mu, lambda, gamma, 1.0, 1.0, 1.0);
        BoundaryData bd;
        bd.flux = ScalarField(mesh, 0.0);
        bd.u_dirichlet = VectorField(mesh);
        bd.lifting = VectorField(mesh);
        MomentumProblem mp;
        mp.mesh = &mesh;
        mp.m = VectorField(mesh);
        mp.xi = ScalarField(mesh, 300.0);
        mp.pi = ScalarField(mesh);
        for (int i = 0; i < mesh.vertex_count(); ++i) mp.pi[i] = mesh.vertex(i).x;
        mp.coeffs = &cs;
        mp.boundary = &bd;
        MomentumSolution sol = solve_momentum(mp);

        const int n = mesh.vertex_count();
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangle(t);
            const double area = mesh.triangle_area(t);
            Vec2 g[3];
            for (int l = 0; l < 3; ++l) g[l] = mesh.hat_gradient(t, l);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int ci = 0; ci < 2; ++ci)
                        for (int cj = 0; cj < 2; ++cj) {
                            const double gi[2] = {g[i].x, g[i].y};
                            const double gj[2] = {g[j].x, g[j].y};
                            double dd = 0.0;
                            for (int r = 0; r < 2; ++r)
                                for (int cc = 0; cc < 2; ++cc) {
                                    const double di = 0.5 * ((r == ci ? gi[cc] : 0.0) +
                                                             (cc == ci ? gi[r] : 0.0));
                                    const double dj = 0.5 * ((r == cj ? gj[cc] : 0.0) +
                                                             (cc == cj ? gj[r] : 0.0));
                                    dd += di * dj;
                                }
                            a(2 * tri[i] + ci, 2 * tri[j] + cj) +=
                                area * (mu * dd + lambda * gi[ci] * gj[cj]);
                        }
            const double pibar = (mp.pi[tri[0]] + mp.pi[tri[1]] + mp.pi[tri[2]]) / 3.0;
            for (int i = 0; i < 3; ++i) {
                rhs[2 * tri[i]] += area * pibar * g[i].x;
                rhs[2 * tri[i] + 1] += area * pibar * g[i].y;
            }
        }
        for (const auto& e : mesh.boundary_edges()) {
            if (e.tag != BoundaryTag::Wall) continue;
            const double len = mesh.edge_length(e);
            for (int c = 0; c < 2; ++c) {
                a(2 * e.a + c, 2 * e.a + c) += gamma * len / 3.0;
                a(2 * e.b + c, 2 * e.b + c) += gamma * len / 3.0;
                a(2 * e.a + c, 2 * e.b + c) += gamma * len / 6.0;
                a(2 * e.b + c, 2 * e.a + c) += gamma * len / 6.0;
            }
        }
        for (int v = 0; v < n; ++v) {
            std::vector<int> pins;
            if (mesh.vertex_on_tag(v, BoundaryTag::Inlet) ||
                mesh.vertex_on_tag(v, BoundaryTag::Outlet))
                pins = {2 * v, 2 * v + 1};
            else if (mesh.vertex_on_tag(v, BoundaryTag::Wall))
                pins = {2 * v + 1};
            for (int d : pins) {
                a.row(d).setZero();
                a.col(d).setZero();
                a(d, d) = 1.0;
                rhs[d] = 0.0;
            }
        }
        const double err =
            (sol.w.values - a.partialPivLu().solve(rhs)).cwiseAbs().maxCoeff();
        if (err > 1e-10) ok = false;
        detail += "momentum " + fmt(err);
    }

    {  // temperature Robin problem on the two-triangle square
        Mesh mesh = build_rectangle_channel(1.0, 1.0, 1, 1);
        CoefficientSet cs = constant_coeffs(1.0, 0.0, 1.0, 1.0, 1.0, 1.0);
        BoundaryData bd;
        bd.flux = ScalarField(mesh, 0.0);
        bd.u_dirichlet = VectorField(mesh);
        bd.lifting = VectorField(mesh);
        bd.theta_in = 300.0;
        bd.theta_wall = 350.0;
        bd.theta_out = 320.0;
        TemperatureProblem tp;
        tp.mesh = &mesh;
        tp.m = VectorField(mesh);
        tp.xi = ScalarField(mesh, 300.0);
        tp.coeffs = &cs;
        tp.boundary = &bd;
        TemperatureSolution sol = solve_temperature(tp);

        const int n = mesh.vertex_count();
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangle(t);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    a(tri[i], tri[j]) += mesh.triangle_area(t) *
                                         mesh.hat_gradient(t, i).dot(mesh.hat_gradient(t, j));
        }
        for (const auto& e : mesh.boundary_edges()) {
            if (e.tag == BoundaryTag::Inlet) continue;
            const double len = mesh.edge_length(e);
            const double theta_e = e.tag == BoundaryTag::Wall ? bd.theta_wall : bd.theta_out;
            a(e.a, e.a) += len / 3.0;
            a(e.b, e.b) += len / 3.0;
            a(e.a, e.b) += len / 6.0;
            a(e.b, e.a) += len / 6.0;
            rhs[e.a] += theta_e * len / 2.0;
            rhs[e.b] += theta_e * len / 2.0;
        }
        for (int v = 0; v < n; ++v) {
            if (!mesh.vertex_on_tag(v, BoundaryTag::Inlet)) continue;
            rhs -= a.col(v) * bd.theta_in;
            a.row(v).setZero();
            a.col(v).setZero();
            a(v, v) = 1.0;
            rhs[v] = bd.theta_in;
        }
        const double err =
            (sol.theta.values - a.partialPivLu().solve(rhs)).cwiseAbs().maxCoeff();
        if (err > 1e-10) ok = false;
        detail += ", temperature " + fmt(err);
    }

    {  // potential with the bordered mean constraint
        Mesh mesh = build_rectangle_channel(1.0, 1.0, 1, 1);
        ScalarField g(mesh, 0.0);
        for (int v : mesh.vertices_on({BoundaryTag::Inlet})) g[v] = -1.0;
        for (int v : mesh.vertices_on({BoundaryTag::Outlet})) g[v] = 1.0;
        ScalarPotential p = solve_scalar_potential(mesh, g);

        const int n = mesh.vertex_count();
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
        for (int t = 0; t < mesh.triangle_count(); ++t) {
            const auto& tri = mesh.triangle(t);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    a(tri[i], tri[j]) += mesh.triangle_area(t) *
                                         mesh.hat_gradient(t, i).dot(mesh.hat_gradient(t, j));
        }
        for (const auto& e : mesh.boundary_edges()) {
            if (e.tag == BoundaryTag::Wall) continue;
            const double len = mesh.edge_length(e);
            rhs[e.a] += len * (g[e.a] / 3.0 + g[e.b] / 6.0);
            rhs[e.b] += len * (g[e.a] / 6.0 + g[e.b] / 3.0);
        }
        Eigen::VectorXd w = p1_integral_weights(mesh);
        for (int i = 0; i < n; ++i) {
            a(n, i) = w[i];
            a(i, n) = w[i];
        }
        Eigen::VectorXd sol = a.partialPivLu().solve(rhs);
        const double err = (p.psi.values - sol.head(n)).cwiseAbs().maxCoeff();
        if (err > 1e-10) ok = false;
        detail += ", potential " + fmt(err);
    }

    report(10, ok, "dense solve oracles", "max dof errors: " + detail);
}

void criterion_11_compatibility_gate() {
    Mesh mesh = build_rectangle_channel(1.0, 0.25, 8, 2);
    ScalarField g(mesh, 0.0);
    for (int v : mesh.vertices_on({BoundaryTag::Inlet})) g[v] = -1.0;  // unbalanced
    bool gated = false;
    try {
        solve_scalar_potential(mesh, g);
    } catch (const CompatibilityError&) {
        gated = true;
    }

    // balanced data passes the same gate
    bool balanced_ok = true;
    ScalarField gb = g;
    for (int v : mesh.vertices_on({BoundaryTag::Outlet})) gb[v] = 1.0;
    try {
        solve_scalar_potential(mesh, gb);
    } catch (const CompatibilityError&) {
        balanced_ok = false;
    }
    report(11, gated && balanced_ok, "flux compatibility gate",
           gated ? "unbalanced data rejected" : "unbalanced data was accepted");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1_skew_symmetry();
    criterion_2_momentum_estimate();
    criterion_3_temperature_estimate();
    criterion_4_min_max();
    criterion_5_mms();

    BaselineRun r32 = run_baseline(32, 8);
    BaselineRun r64 = run_baseline(64, 16);
    BaselineRun r128 = run_baseline(128, 32);
    criteria_6_and_9(r32, r64, r128);
    criterion_7_convergence(r32);
    criterion_8_truncation_sweep();
    criterion_10_dense_oracles();
    criterion_11_compatibility_gate();

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d criterion(s) failed; %.1f s total\n", failures, secs);
    return failures == 0 ? 0 : 1;
}
