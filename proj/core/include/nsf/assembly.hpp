#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <optional>
#include <vector>

#include "nsf/fields.hpp"
#include "nsf/mesh.hpp"

namespace nsf {

using SparseMat = Eigen::SparseMatrix<double>;

/// Pointwise coefficient c(x, state); `state` is a P1 field interpolated at the
/// quadrature point (0 when no state field is supplied).
using Coefficient = std::function<double(const Vec2&, double)>;

inline Coefficient constant_coeff(double c) {
    return [c](const Vec2&, double) { return c; };
}

class AssemblyError : public std::runtime_error {
  public:
    explicit AssemblyError(const std::string& what) : std::runtime_error(what) {}
};

/// Assembled square system with constraint bookkeeping. Dirichlet constraints
/// are applied by row/column elimination inside solve(); the optional
/// mean-value constraint becomes a bordered Lagrange row.
struct SparseSystem {
    SparseMat matrix;
    Eigen::VectorXd rhs;
    std::vector<std::pair<int, double>> dirichlet;
    std::optional<Eigen::VectorXd> mean_constraint;  // weights w with wᵀx = 0

    explicit SparseSystem(int n) : matrix(n, n), rhs(Eigen::VectorXd::Zero(n)) {}
};

/// Number of assembly worker threads (NSF_THREADS, default 1).
int assembly_threads();

// ∫ c ∇a·∇b dx on scalar dofs.
SparseMat assemble_stiffness(const Mesh& mesh, const Coefficient& coeff,
                             const ScalarField* state = nullptr);

// ∫ c a b dx on scalar dofs.
SparseMat assemble_mass(const Mesh& mesh, const Coefficient& coeff,
                        const ScalarField* state = nullptr);

// ∫ μ Da:Db + λ (∇·a)(∇·b) dx on interleaved vector dofs. Checks
// 2λ+μ ≥ 0 and μ > 0 at every quadrature point.
SparseMat assemble_symgrad(const Mesh& mesh, const Coefficient& mu, const Coefficient& lambda,
                           const ScalarField* state = nullptr);

// One-sided advection K_ij = ∫ (m·∇φ_j) φ_i dx (trial j, test i).
SparseMat assemble_advection_centered(const Mesh& mesh, const VectorField& m);

// Antisymmetrized advection ½(K − Kᵀ) + ½ B_g, where B_g is the boundary mass
// on Γ_D weighted by the nodal Dirichlet flux g = ρ∞ u_D·n. The quadratic form
// then equals ½∫_{Γ_D} g a² exactly.
SparseMat assemble_advection_skew(const Mesh& mesh, const VectorField& m, const ScalarField& g);

// Low-order upwind operator: K with artificial diffusion d_ij = max(K_ij, K_ji, 0)
// moved onto the diagonal, so all off-diagonals are nonpositive and row sums
// stay zero. On nonobtuse meshes the resulting system matrix is an M-matrix.
SparseMat assemble_advection_upwind(const Mesh& mesh, const VectorField& m);

// ∫_γ c a b ds over edges carrying one of the tags, on scalar dofs.
SparseMat assemble_boundary_mass(const Mesh& mesh, std::initializer_list<BoundaryTag> tags,
                                 const Coefficient& coeff, const ScalarField* state = nullptr);

// Same boundary form with the coefficient given as a nodal P1 field.
SparseMat assemble_boundary_mass_nodal(const Mesh& mesh, std::initializer_list<BoundaryTag> tags,
                                       const ScalarField& coeff);

// Load vector v ↦ ∫ π ∇·v dx on interleaved vector dofs.
Eigen::VectorXd assemble_div_rhs(const Mesh& mesh, const ScalarField& pi);

// Expand a scalar-dof matrix to interleaved vector dofs (block-diagonal action
// on each Cartesian component).
SparseMat expand_to_vector_dofs(const SparseMat& scalar);

// Load vector b_i = ∫_{γ} f φ_i ds with nodal P1 data f on tagged edges.
Eigen::VectorXd assemble_boundary_rhs(const Mesh& mesh, std::initializer_list<BoundaryTag> tags,
                                      const ScalarField& f);

}  // namespace nsf
