#pragma once

// Whitened simultaneous diagonalization of a symmetric third-order tensor
// F = V (x) V (x) C: the columns of V are recovered (up to permutation and
// per-column scale) from the first two frontal slices.

#include <string>

#include "superres/tensor.hpp"
#include "superres/types.hpp"

namespace superres {

struct DecompositionDiagnostics {
    double sigma_k = 0.0;       ///< of the whitening slice
    double sigma_k1 = 0.0;      ///< sigma_{k+1} of the whitening slice
    double whitening_residual = 0.0;
    double pencil_sigma_min = 0.0;
    double sep_D = 0.0;
    double eig_residual = 0.0;
    double cond_V = 0.0;
    bool ill_separated = false;
    bool eig_flagged = false;
    /// How the whitened slices are formed; see tensor_decomp.
    std::string whitening = "svd-conjugate";
};

struct JennrichOptions {
    double rank_rel_tol = 1e-8;    ///< relative to sigma_1 of slice 1
    double pencil_rel_tol = 1e-10; ///< relative to ||E_2||
    double sep_tol = 1e-6;
};

struct Whitening {
    MatrixXcd P;       ///< m x k, orthonormal
    VectorXd sigma;    ///< top-k singular values of slice 1
    double sigma_next = 0.0;
    double residual = 0.0;  ///< ||F(I,I,e_1) - P Diag(sigma) Q^H||_2
};

/// Truncated rank-k SVD of the first frontal slice.
Whitening svd_whiten(const ComplexTensor3& F, int k);

struct PencilEigen {
    MatrixXcd U;          ///< eigenvectors of E_1 E_2^{-1}, unit columns
    VectorXcd eigenvalues;
    double sep_D = 0.0;
    double sigma_min_E2 = 0.0;
    double residual = 0.0;
    bool ill_separated = false;
    bool flagged = false;
};

/// Eigen-decomposition of E_1 E_2^{-1} (computed with a linear solve).
/// Throws SingularPencilError when sigma_min(E_2) < pencil_rel_tol ||E_2||.
PencilEigen eigen_pencil(const MatrixXcd& E1, const MatrixXcd& E2, double pencil_rel_tol = 1e-10,
                         double sep_tol = 1e-6);

struct JennrichResult {
    MatrixXcd V;           ///< m x k factor estimate
    VectorXcd eigenvalues; ///< matched to the columns of V
    DecompositionDiagnostics diagnostics;
};

/// Recovers the k-column factor of F from slices 1 and 2.
///
/// Slice 1 is whitened by its truncated SVD P Sigma Q^H. The slices are
/// projected as E_i = P^H F_i conj(P) (= F(conj P, conj P, e_i)): for
/// F_i = V D_i V^T this gives E_i = U D_i U^T with U = P^H V, and P U = V.
/// Using P^T in place of P^H would give P^T V, which is singular whenever
/// V^T V is, even though V has full column rank.
///
/// Throws RankDeficiencyError when sigma_k < rank_rel_tol * sigma_1 and
/// SingularPencilError as in eigen_pencil. Poorly separated eigenvalues are
/// reported through diagnostics.ill_separated, not thrown.
JennrichResult tensor_decomp(const ComplexTensor3& F, int k, const JennrichOptions& opts = {});

/// Probabilistic lower bound on sep(D): delta * delta_v / (sqrt(d) k^2).
double sep_lower_bound(double delta, int d, int k, double delta_v);

/// min_{j != j'} |lambda_j - lambda_j'|, +inf for fewer than two values.
double eigen_separation(const VectorXcd& values);

}  // namespace superres
