#pragma once

#include <string>
#include <vector>

#include "nsf/assembly.hpp"

namespace nsf {

enum class SolveMethod { Direct, ConjugateGradient, BiCGStab };

struct SolveOptions {
    SolveMethod method = SolveMethod::Direct;
    double tol = 1e-12;  // relative residual
    int max_iter = 10000;
};

class SolveError : public std::runtime_error {
  public:
    SolveError(const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), residual_history(std::move(residuals)) {}
    std::vector<double> residual_history;
};

/// Solves the constrained system. Dirichlet dofs are eliminated (exact in the
/// returned vector); a mean-value constraint is handled by a bordered Lagrange
/// row and always solved directly.
Eigen::VectorXd solve(const SparseSystem& system, const SolveOptions& opts = {});

SolveMethod parse_solve_method(const std::string& name);

}  // namespace nsf
