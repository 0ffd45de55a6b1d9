#include "nsf/assembly.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "nsf/quadrature.hpp"

namespace nsf {

namespace {

using Triplet = Eigen::Triplet<double>;

Vec2 quad_point(const Mesh& mesh, int t, const std::array<double, 3>& bary) {
    const auto& tri = mesh.triangle(t);
    return mesh.vertex(tri[0]) * bary[0] + mesh.vertex(tri[1]) * bary[1] +
           mesh.vertex(tri[2]) * bary[2];
}

double interp_state(const ScalarField* state, int t, const std::array<double, 3>& bary) {
    return state ? state->eval(t, bary) : 0.0;
}

// Runs `body(t, triplets)` over all triangles, chunked across NSF_THREADS
// workers with per-chunk triplet buffers merged in chunk order.
template <typename Body>
std::vector<Triplet> element_loop(const Mesh& mesh, Body&& body) {
    const int nt = mesh.triangle_count();
    const int nthreads = std::min(assembly_threads(), nt);
    if (nthreads <= 1) {
        std::vector<Triplet> trips;
        trips.reserve(static_cast<size_t>(nt) * 9);
        for (int t = 0; t < nt; ++t) body(t, trips);
        return trips;
    }
    std::vector<std::vector<Triplet>> buffers(nthreads);
    std::vector<std::thread> workers;
    const int chunk = (nt + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
        workers.emplace_back([&, w] {
            auto& buf = buffers[w];
            const int lo = w * chunk, hi = std::min(nt, lo + chunk);
            buf.reserve(static_cast<size_t>(hi - lo) * 9);
            for (int t = lo; t < hi; ++t) body(t, buf);
        });
    }
    for (auto& th : workers) th.join();
    std::vector<Triplet> trips;
    for (auto& buf : buffers) trips.insert(trips.end(), buf.begin(), buf.end());
    return trips;
}

SparseMat from_triplets(int n, const std::vector<Triplet>& trips) {
    SparseMat A(n, n);
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

}  // namespace

int assembly_threads() {
    static const int n = [] {
        const char* env = std::getenv("NSF_THREADS");
        if (!env) return 1;
        const int v = std::atoi(env);
        return v > 0 ? v : 1;
    }();
    return n;
}

SparseMat assemble_stiffness(const Mesh& mesh, const Coefficient& coeff,
                             const ScalarField* state) {
    auto trips = element_loop(mesh, [&](int t, std::vector<Triplet>& out) {
        const auto& tri = mesh.triangle(t);
        const double area = mesh.triangle_area(t);
        double cbar = 0.0;
        for (const auto& qp : triangle_rule()) {
            const double c = coeff(quad_point(mesh, t, qp.bary), interp_state(state, t, qp.bary));
            if (!std::isfinite(c))
                throw AssemblyError("stiffness: non-finite coefficient on element " +
                                    std::to_string(t));
            cbar += qp.weight * c;  // quadrature mean over the element
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out.emplace_back(tri[i], tri[j],
                                 cbar * area * mesh.hat_gradient(t, i).dot(mesh.hat_gradient(t, j)));
    });
    return from_triplets(mesh.vertex_count(), trips);
}

SparseMat assemble_mass(const Mesh& mesh, const Coefficient& coeff, const ScalarField* state) {
    auto trips = element_loop(mesh, [&](int t, std::vector<Triplet>& out) {
        const auto& tri = mesh.triangle(t);
        const double area = mesh.triangle_area(t);
        for (const auto& qp : triangle_rule()) {
            const double c = coeff(quad_point(mesh, t, qp.bary), interp_state(state, t, qp.bary));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    out.emplace_back(tri[i], tri[j],
                                     qp.weight * area * c * qp.bary[i] * qp.bary[j]);
        }
    });
    return from_triplets(mesh.vertex_count(), trips);
}

SparseMat assemble_symgrad(const Mesh& mesh, const Coefficient& mu, const Coefficient& lambda,
                           const ScalarField* state) {
    auto trips = element_loop(mesh, [&](int t, std::vector<Triplet>& out) {
        const auto& tri = mesh.triangle(t);
        const double area = mesh.triangle_area(t);
        double mubar = 0.0, lambdabar = 0.0;
        for (const auto& qp : triangle_rule()) {
            const Vec2 x = quad_point(mesh, t, qp.bary);
            const double s = interp_state(state, t, qp.bary);
            const double m = mu(x, s), l = lambda(x, s);
            if (!(m > 0.0))
                throw AssemblyError("symgrad: viscosity bound (H1) violated on element " +
                                    std::to_string(t));
            if (2.0 * l + m < 0.0)
                throw AssemblyError("symgrad: 2λ+μ < 0 on element " + std::to_string(t));
            mubar += qp.weight * m;
            lambdabar += qp.weight * l;
        }
        // D(a):D(b) for P1: constant per element. Dof layout per vertex: (2v, 2v+1).
        for (int i = 0; i < 3; ++i) {
            const Vec2 gi = mesh.hat_gradient(t, i);
            for (int j = 0; j < 3; ++j) {
                const Vec2 gj = mesh.hat_gradient(t, j);
                // component pair (r, c): trial dof (j,c), test dof (i,r)
                // D(u)_{kl} for basis (j,c): ½(δ_{kc} gj_l + δ_{lc} gj_k)
                for (int r = 0; r < 2; ++r) {
                    for (int c = 0; c < 2; ++c) {
                        const double gi_arr[2] = {gi.x, gi.y};
                        const double gj_arr[2] = {gj.x, gj.y};
                        // μ D:D term
                        double dterm = 0.5 * gi_arr[c] * gj_arr[r];
                        if (r == c) dterm += 0.5 * gi.dot(gj);
                        // λ div·div term
                        const double vterm = gi_arr[r] * gj_arr[c];
                        out.emplace_back(2 * tri[i] + r, 2 * tri[j] + c,
                                         area * (mubar * dterm + lambdabar * vterm));
                    }
                }
            }
        }
    });
    return from_triplets(2 * mesh.vertex_count(), trips);
}

SparseMat assemble_advection_centered(const Mesh& mesh, const VectorField& m) {
    if (!m.values.allFinite()) throw AssemblyError("advection: non-finite momentum field");
    auto trips = element_loop(mesh, [&](int t, std::vector<Triplet>& out) {
        const auto& tri = mesh.triangle(t);
        const double area = mesh.triangle_area(t);
        for (const auto& qp : triangle_rule()) {
            const Vec2 mq = m.eval(t, qp.bary);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    out.emplace_back(tri[i], tri[j],
                                     qp.weight * area * mq.dot(mesh.hat_gradient(t, j)) *
                                         qp.bary[i]);
        }
    });
    return from_triplets(mesh.vertex_count(), trips);
}

SparseMat assemble_advection_skew(const Mesh& mesh, const VectorField& m, const ScalarField& g) {
    const SparseMat K = assemble_advection_centered(mesh, m);
    const SparseMat Bg =
        assemble_boundary_mass_nodal(mesh, {BoundaryTag::Inlet, BoundaryTag::Outlet}, g);
    return 0.5 * (K - SparseMat(K.transpose())) + 0.5 * Bg;
}

SparseMat assemble_advection_upwind(const Mesh& mesh, const VectorField& m) {
    SparseMat K = assemble_advection_centered(mesh, m);
    K.makeCompressed();
    const int n = K.rows();
    // Symmetrized pattern so d_ij = d_ji is visited from both sides.
    SparseMat pattern = K + SparseMat(K.transpose());
    std::vector<Triplet> trips;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < pattern.outerSize(); ++c) {
        for (SparseMat::InnerIterator it(pattern, c); it; ++it) {
            const int i = it.row(), j = it.col();
            if (i == j) {
                diag[i] += K.coeff(i, i);
                continue;
            }
            const double kij = K.coeff(i, j), kji = K.coeff(j, i);
            const double d = std::max({kij, kji, 0.0});
            const double off = kij - d;
            if (off != 0.0) trips.emplace_back(i, j, off);
            diag[i] += d;
        }
    }
    for (int i = 0; i < n; ++i)
        if (diag[i] != 0.0) trips.emplace_back(i, i, diag[i]);
    SparseMat L(n, n);
    L.setFromTriplets(trips.begin(), trips.end());
    return L;
}

SparseMat assemble_boundary_mass(const Mesh& mesh, std::initializer_list<BoundaryTag> tags,
                                 const Coefficient& coeff, const ScalarField* state) {
    std::vector<Triplet> trips;
    for (const auto& e : mesh.boundary_edges()) {
        bool match = false;
        for (auto tag : tags) match |= (e.tag == tag);
        if (!match) continue;
        const double len = mesh.edge_length(e);
        const int idx[2] = {e.a, e.b};
        for (const auto& qp : edge_rule()) {
            const Vec2 x = mesh.vertex(e.a) * (1.0 - qp.s) + mesh.vertex(e.b) * qp.s;
            const double s = state ? (1.0 - qp.s) * state->values[e.a] + qp.s * state->values[e.b]
                                   : 0.0;
            const double c = coeff(x, s);
            const double phi[2] = {1.0 - qp.s, qp.s};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    trips.emplace_back(idx[i], idx[j], len * qp.weight * c * phi[i] * phi[j]);
        }
    }
    return from_triplets(mesh.vertex_count(), trips);
}

SparseMat assemble_boundary_mass_nodal(const Mesh& mesh, std::initializer_list<BoundaryTag> tags,
                                       const ScalarField& coeff) {
    std::vector<Triplet> trips;
    for (const auto& e : mesh.boundary_edges()) {
        bool match = false;
        for (auto tag : tags) match |= (e.tag == tag);
        if (!match) continue;
        const double len = mesh.edge_length(e);
        const int idx[2] = {e.a, e.b};
        for (const auto& qp : edge_rule()) {
            const double c = (1.0 - qp.s) * coeff.values[e.a] + qp.s * coeff.values[e.b];
            const double phi[2] = {1.0 - qp.s, qp.s};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    trips.emplace_back(idx[i], idx[j], len * qp.weight * c * phi[i] * phi[j]);
        }
    }
    return from_triplets(mesh.vertex_count(), trips);
}

Eigen::VectorXd assemble_div_rhs(const Mesh& mesh, const ScalarField& pi) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * mesh.vertex_count());
    for (int t = 0; t < mesh.triangle_count(); ++t) {
        const auto& tri = mesh.triangle(t);
        const double area = mesh.triangle_area(t);
        // ∇·v is constant per element; ∫_T π dx is exact with the midpoint rule.
        double pibar = 0.0;
        for (const auto& qp : triangle_rule()) pibar += qp.weight * pi.eval(t, qp.bary);
        for (int j = 0; j < 3; ++j) {
            const Vec2 gj = mesh.hat_gradient(t, j);
            b[2 * tri[j]] += area * pibar * gj.x;
            b[2 * tri[j] + 1] += area * pibar * gj.y;
        }
    }
    return b;
}

SparseMat expand_to_vector_dofs(const SparseMat& scalar) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<size_t>(scalar.nonZeros()) * 2);
    for (int k = 0; k < scalar.outerSize(); ++k)
        for (SparseMat::InnerIterator it(scalar, k); it; ++it) {
            trips.emplace_back(2 * it.row(), 2 * it.col(), it.value());
            trips.emplace_back(2 * it.row() + 1, 2 * it.col() + 1, it.value());
        }
    SparseMat out(2 * scalar.rows(), 2 * scalar.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Eigen::VectorXd assemble_boundary_rhs(const Mesh& mesh, std::initializer_list<BoundaryTag> tags,
                                      const ScalarField& f) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (const auto& e : mesh.boundary_edges()) {
        bool match = false;
        for (auto tag : tags) match |= (e.tag == tag);
        if (!match) continue;
        const double len = mesh.edge_length(e);
        for (const auto& qp : edge_rule()) {
            const double fv = (1.0 - qp.s) * f.values[e.a] + qp.s * f.values[e.b];
            b[e.a] += len * qp.weight * fv * (1.0 - qp.s);
            b[e.b] += len * qp.weight * fv * qp.s;
        }
    }
    return b;
}

}  // namespace nsf
