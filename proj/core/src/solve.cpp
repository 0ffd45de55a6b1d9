#include "nsf/solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <numeric>

namespace nsf {

namespace {

struct Reduced {
    SparseMat A;
    Eigen::VectorXd b;
    std::vector<int> free_of_full;   // reduced index -> full index
};

Reduced eliminate_dirichlet(const SparseSystem& sys) {
    const int n = static_cast<int>(sys.matrix.rows());
    std::vector<char> fixed(n, 0);
    Eigen::VectorXd xfix = Eigen::VectorXd::Zero(n);
    for (const auto& [dof, val] : sys.dirichlet) {
        fixed[dof] = 1;
        xfix[dof] = val;
    }
    std::vector<int> full_to_free(n, -1);
    Reduced r;
    for (int i = 0; i < n; ++i) {
        if (!fixed[i]) {
            full_to_free[i] = static_cast<int>(r.free_of_full.size());
            r.free_of_full.push_back(i);
        }
    }
    const int m = static_cast<int>(r.free_of_full.size());
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) b[i] = sys.rhs[r.free_of_full[i]];
    for (int c = 0; c < sys.matrix.outerSize(); ++c) {
        for (SparseMat::InnerIterator it(sys.matrix, c); it; ++it) {
            const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
            if (fixed[i]) continue;
            if (fixed[j])
                b[full_to_free[i]] -= it.value() * xfix[j];
            else
                trips.emplace_back(full_to_free[i], full_to_free[j], it.value());
        }
    }
    r.A.resize(m, m);
    r.A.setFromTriplets(trips.begin(), trips.end());
    r.b = std::move(b);
    return r;
}

Eigen::VectorXd direct_solve(const SparseMat& A, const Eigen::VectorXd& b) {
    Eigen::SparseLU<SparseMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SolveError("direct solve: factorization failed (singular constrained matrix?)");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw SolveError("direct solve: back-substitution failed");
    return x;
}

template <typename Solver>
Eigen::VectorXd iterative_solve(const SparseMat& A, const Eigen::VectorXd& b,
                                const SolveOptions& opts, const char* name) {
    Solver solver;
    solver.setTolerance(opts.tol);
    solver.setMaxIterations(opts.max_iter);
    solver.compute(A);
    Eigen::VectorXd x = solver.solve(b);
    if (solver.info() != Eigen::Success) {
        throw SolveError(std::string(name) + ": no convergence within " +
                             std::to_string(opts.max_iter) + " iterations (residual " +
                             std::to_string(solver.error()) + ")",
                         {solver.error()});
    }
    return x;
}

}  // namespace

Eigen::VectorXd solve(const SparseSystem& sys, const SolveOptions& opts) {
    Reduced r = eliminate_dirichlet(sys);
    const int m = static_cast<int>(r.A.rows());
    Eigen::VectorXd xr;

    if (sys.mean_constraint) {
        // Bordered system [A w; wᵀ 0]; solved directly.
        const Eigen::VectorXd& wfull = *sys.mean_constraint;
        std::vector<Eigen::Triplet<double>> trips;
        for (int c = 0; c < r.A.outerSize(); ++c)
            for (SparseMat::InnerIterator it(r.A, c); it; ++it)
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                   it.value());
        for (int i = 0; i < m; ++i) {
            const double w = wfull[r.free_of_full[i]];
            if (w != 0.0) {
                trips.emplace_back(i, m, w);
                trips.emplace_back(m, i, w);
            }
        }
        SparseMat B(m + 1, m + 1);
        B.setFromTriplets(trips.begin(), trips.end());
        Eigen::VectorXd bb(m + 1);
        bb.head(m) = r.b;
        bb[m] = 0.0;
        xr = direct_solve(B, bb).head(m);
    } else {
        switch (opts.method) {
            case SolveMethod::Direct:
                xr = direct_solve(r.A, r.b);
                break;
            case SolveMethod::ConjugateGradient:
                xr = iterative_solve<
                    Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper>>(
                    r.A, r.b, opts, "cg");
                break;
            case SolveMethod::BiCGStab:
                xr = iterative_solve<Eigen::BiCGSTAB<SparseMat>>(r.A, r.b, opts, "bicgstab");
                break;
        }
        const double bnorm = r.b.norm();
        if (bnorm > 0.0) {
            const double res = (r.A * xr - r.b).norm() / bnorm;
            if (!(res <= std::max(opts.tol, 1e-8)))
                throw SolveError("solve: residual " + std::to_string(res) + " above tolerance",
                                 {res});
        }
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.matrix.rows());
    for (const auto& [dof, val] : sys.dirichlet) x[dof] = val;
    for (int i = 0; i < m; ++i) x[r.free_of_full[i]] = xr[i];
    return x;
}

SolveMethod parse_solve_method(const std::string& name) {
    if (name == "direct") return SolveMethod::Direct;
    if (name == "cg" || name == "conjugate-gradient") return SolveMethod::ConjugateGradient;
    if (name == "bicgstab") return SolveMethod::BiCGStab;
    throw std::invalid_argument("unknown solver '" + name + "'");
}

}  // namespace nsf
