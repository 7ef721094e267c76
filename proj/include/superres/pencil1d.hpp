#pragma once

// One-dimensional matrix pencil from measurements at consecutive integer
// frequencies 0, 1, ..., 2m - 1.

#include "superres/model.hpp"
#include "superres/types.hpp"

namespace superres {

struct HankelPair {
    MatrixXcd H0;  ///< H0(i, j) = f(i + j)
    MatrixXcd H1;  ///< H1(i, j) = f(i + j + 1)
};

/// Queries f at 0..2m-1 (2m distinct frequencies) and assembles the pair.
HankelPair build_hankel(MeasurementOracle& oracle, int m);

struct PencilResult {
    MatrixXd locations;  ///< k x 1, in (-1, 1]
    VectorXcd weights;
    VectorXcd nodes;     ///< lambda_j, noiselessly exp(i pi mu_j)
    double sigma_k = 0.0;
    double sep = 0.0;    ///< min pairwise node distance
    bool collision_warning = false;
};

/// Whitens H0 by its rank-k SVD, solves the k x k pencil through the same
/// decomposition path as the d-dimensional algorithm, and fits the weights
/// by least squares against the Vandermonde model on all 2m samples.
PencilResult pencil_recover(const HankelPair& pair, int k, double sep_tol = 1e-6);

/// V(n, j) = exp(i pi n mu_j) for n = 0..m-1.
MatrixXcd vandermonde(const VectorXd& locations, int m);

/// sigma_max / sigma_min of vandermonde(locations, m).
double vandermonde_cond(const VectorXd& locations, int m);

}  // namespace superres
