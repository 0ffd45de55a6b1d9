#include <benchmark/benchmark.h>

#include "nsf/config.hpp"
#include "nsf/fixed_point.hpp"

using namespace nsf;

namespace {

Mesh bench_mesh(int n) { return build_rectangle_channel(1.0, 0.25, 4 * n, n); }

void bm_assemble_stiffness(benchmark::State& state) {
    Mesh mesh = bench_mesh(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        SparseMat a = assemble_stiffness(mesh, constant_coeff(1.0));
        benchmark::DoNotOptimize(a);
    }
    state.SetItemsProcessed(state.iterations() * mesh.triangle_count());
}

void bm_assemble_symgrad(benchmark::State& state) {
    Mesh mesh = bench_mesh(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        SparseMat a = assemble_symgrad(mesh, constant_coeff(1.0), constant_coeff(-0.2));
        benchmark::DoNotOptimize(a);
    }
    state.SetItemsProcessed(state.iterations() * mesh.triangle_count());
}

void bm_assemble_advection_skew(benchmark::State& state) {
    Mesh mesh = bench_mesh(static_cast<int>(state.range(0)));
    VectorField m(mesh, {1.0, 0.2});
    ScalarField g(mesh, 0.0);
    for (auto _ : state) {
        SparseMat a = assemble_advection_skew(mesh, m, g);
        benchmark::DoNotOptimize(a);
    }
    state.SetItemsProcessed(state.iterations() * mesh.triangle_count());
}

void bm_potential_solve(benchmark::State& state) {
    Mesh mesh = bench_mesh(static_cast<int>(state.range(0)));
    BoundaryData bd = make_channel_boundary_data(mesh, InletProfile::Parabolic, 1.0, 1.184);
    for (auto _ : state) {
        ScalarPotential p = solve_scalar_potential(mesh, bd.flux);
        benchmark::DoNotOptimize(p.psi.values);
    }
}

void bm_apply_map(benchmark::State& state) {
    RunConfig cfg = default_channel_config();
    cfg.geometry.nx = 4 * static_cast<int>(state.range(0));
    cfg.geometry.ny = static_cast<int>(state.range(0));
    Mesh mesh = build_mesh(cfg.geometry);
    CoefficientSet cs = build_coefficients(cfg);
    BoundaryData bd = build_boundary(cfg, mesh);
    RunParameters params = build_parameters(cfg);
    FieldState s = initial_state(mesh, bd);
    for (auto _ : state) {
        ApplyResult r = apply_map(s, mesh, cs, bd, params);
        benchmark::DoNotOptimize(r.next.pi.values);
    }
}

}  // namespace

BENCHMARK(bm_assemble_stiffness)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bm_assemble_symgrad)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bm_assemble_advection_skew)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bm_potential_solve)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bm_apply_map)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
