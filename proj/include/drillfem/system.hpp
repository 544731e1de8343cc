#pragma once

#include "drillfem/forms.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <optional>
#include <vector>

namespace drillfem {

enum class Method { Standard, Mixed, Hughes };

enum class ScalarSpace { None, P0, P1, Q1 };

struct MethodConfig {
    Method method = Method::Standard;
    ElemKind v_space = ElemKind::Q1;  // P1 or Q1 vector displacement
    ScalarSpace q_space = ScalarSpace::None;
    std::optional<double> hughes_gamma;  // penalty, defaults to mu
};

/// Assembled block system. Displacement DOFs are node-major (2*node + comp);
/// curl DOFs are one per node (P1/Q1) or one per cell (P0) and never carry
/// Dirichlet constraints. The solved matrix is
///   Standard:  A
///   Mixed:     [[A,  B^T], [ B, -C]]   rhs [F;  G]
///   Hughes:    [[A, -B^T], [-B,  C]]   rhs [F; -G]
/// with A = K_full (Standard), K_a (Mixed), K_full + gamma K_cc (Hughes),
/// C the 1/mu- (resp. 1/gamma-) scaled curl mass, and all three symmetric.
struct BlockSystem {
    Method method = Method::Standard;
    ScalarSpace q_space = ScalarSpace::None;
    Material material;
    double gamma = 0.0;  // Hughes penalty actually used

    Eigen::SparseMatrix<double> A;  // n_u x n_u
    Eigen::SparseMatrix<double> B;  // n_p x n_u (empty for Standard)
    Eigen::SparseMatrix<double> C;  // n_p x n_p (empty for Standard)
    Eigen::VectorXd F;              // n_u
    Eigen::VectorXd G;              // n_p

    std::vector<bool> u_constrained;   // full-size flags, from Dirichlet edges
    std::vector<int> reduced_of_full;  // full u-DOF -> reduced index or -1
    int n_u_full = 0;
    bool reduced = false;

    int n_u() const { return static_cast<int>(A.rows()); }
    int n_p() const { return static_cast<int>(B.rows()); }

    /// Gather a full-size displacement vector into the current (possibly
    /// reduced) DOF numbering, and the reverse scatter (zeros on constrained).
    Eigen::VectorXd reduce_u(const Eigen::VectorXd& full) const;
    Eigen::VectorXd expand_u(const Eigen::VectorXd& current) const;
};

struct FieldSolution {
    Eigen::VectorXd u;  // full-size displacement coefficients, zeros where constrained
    Eigen::VectorXd p;  // curl coefficients, empty for Standard
    double residual_norm = 0.0;
};

/// Assembles the block system for a method on a tagged mesh. Throws when the
/// element pair does not match the mesh cell kind or the config is invalid.
BlockSystem assemble(const Mesh& mesh, const MethodConfig& config, const Material& mat,
                     const LoadSpec& loads);

/// Eliminates constrained displacement rows/columns (homogeneous Dirichlet).
/// Idempotent; throws when every displacement DOF is constrained.
BlockSystem apply_dirichlet(const BlockSystem& sys);

/// Element-wise elimination of a discontinuous (P0) curl space: returns the
/// displacement-only system A + s B^T C^-1 B, F + s B^T C^-1 G with s = +1
/// (Mixed) or -1 (Hughes). Throws for continuous curl spaces.
BlockSystem condense_p(const BlockSystem& sys);

/// Direct sparse solve of the (reduced) system. Enforces the residual
/// contract |M x - rhs| <= 1e-10 (1 + |rhs|) and throws otherwise.
FieldSolution solve(const BlockSystem& sys);

/// Smallest |eigenvalue| of the assembled block matrix divided by the
/// largest (dense diagnostic; intended for coarse meshes only).
double stability_probe(const BlockSystem& sys);

/// Assembled matrix and right-hand side actually handed to the solver.
std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> full_system(const BlockSystem& sys);

enum class DisplacementOperator { Full, Rearranged, CurlCurl };

/// Global displacement matrix of a single bilinear form, unconstrained.
Eigen::SparseMatrix<double> assemble_operator(const Mesh& mesh, const Material& mat,
                                              DisplacementOperator op);

}  // namespace drillfem
