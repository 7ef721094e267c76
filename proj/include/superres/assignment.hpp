#pragma once

#include <vector>

#include "superres/types.hpp"

namespace superres {

/// A perfect matching of a square cost matrix: rows (estimates) i is paired
/// with column (truth) perm[i].
struct Assignment {
    double value = 0.0;
    std::vector<int> perm;
};

/// Minimizes sum_i C(i, perm[i]) (Hungarian algorithm, O(n^3)).
Assignment min_sum_assignment(const MatrixXd& cost);

/// Minimizes max_i C(i, perm[i]): bisection over the sorted distinct costs,
/// each threshold tested for a perfect bipartite matching.
Assignment bottleneck_assignment(const MatrixXd& cost);

/// D(i, j) = ||a_i - b_j||_2 for row sets a, b.
MatrixXd distance_matrix(const MatrixXd& a, const MatrixXd& b);

}  // namespace superres
