#pragma once

// Dense linear-algebra kernels used by the decomposition. Factorizations are
// delegated to Eigen; this layer fixes ordering, normalization and the error
// reporting the rest of the library relies on.

#include "superres/types.hpp"

namespace superres {

struct TruncatedSvd {
    MatrixXcd P;        ///< n x k, orthonormal columns (left singular vectors)
    VectorXd sigma;     ///< k singular values, descending
    MatrixXcd Q;        ///< n x k right singular vectors
    double sigma_next;  ///< sigma_{k+1}, 0 when k == min(rows, cols)
};

/// Rank-k truncated SVD: M ~= P * Diag(sigma) * Q^H.
TruncatedSvd truncated_svd(const MatrixXcd& M, int k);

struct EigenDecomposition {
    VectorXcd values;
    MatrixXcd vectors;  ///< unit-norm columns, matching `values`
    /// ||M V - V Diag(values)||_F / ||M||_F
    double relative_residual = 0.0;
    /// cond_2 of the eigenvector matrix
    double vector_cond = 1.0;
    /// Residual above 1e-8 or nearly dependent eigenvectors (defective or
    /// close to it).
    bool flagged = false;
};

/// Eigen-decomposition of a general complex square matrix. Eigenpairs are
/// ordered by descending |value|, ties broken by ascending phase. Throws
/// KernelError when the QR iteration does not converge.
EigenDecomposition eig_nonsymmetric(const MatrixXcd& M);

/// sigma_max / sigma_min of a full-rank matrix (+inf when sigma_min == 0).
double cond2(const MatrixXcd& M);

/// Largest singular value.
double norm2(const MatrixXcd& M);

/// Gershgorin radii: r_i = sum_{j != i} |M(i, j)|.
VectorXd gershgorin_radii(const MatrixXcd& M);

/// True when every eigenvalue lies in the union of the Gershgorin discs
/// centred at M(i, i), with `slack` added to each radius.
bool within_gershgorin(const MatrixXcd& M, const VectorXcd& eigenvalues, double slack = 0.0);

}  // namespace superres
