#include "superres/assignment.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace superres {

namespace {

void check_square(const MatrixXd& cost) {
    if (cost.rows() != cost.cols())
        throw DomainError("assignment: cost matrix must be square (got " +
                          std::to_string(cost.rows()) + " x " + std::to_string(cost.cols()) + ")");
    if (!cost.allFinite()) throw DomainError("assignment: costs must be finite");
}

// Kuhn's augmenting-path matching restricted to edges with cost <= limit.
bool perfect_matching(const MatrixXd& cost, double limit, std::vector<int>& match_col) {
    const int n = static_cast<int>(cost.rows());
    match_col.assign(static_cast<std::size_t>(n), -1);  // column -> row
    std::vector<char> visited;
    const auto augment = [&](auto&& self, int row) -> bool {
        for (int c = 0; c < n; ++c) {
            if (cost(row, c) > limit || visited[c]) continue;
            visited[c] = 1;
            if (match_col[c] < 0 || self(self, match_col[c])) {
                match_col[c] = row;
                return true;
            }
        }
        return false;
    };
    for (int r = 0; r < n; ++r) {
        visited.assign(static_cast<std::size_t>(n), 0);
        if (!augment(augment, r)) return false;
    }
    return true;
}

}  // namespace

Assignment min_sum_assignment(const MatrixXd& cost) {
    check_square(cost);
    const int n = static_cast<int>(cost.rows());
    Assignment out;
    if (n == 0) return out;

    // Potentials formulation (1-based, column 0 is a sentinel).
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    out.perm.assign(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j) out.perm[p[j] - 1] = j - 1;
    for (int i = 0; i < n; ++i) out.value += cost(i, out.perm[i]);
    return out;
}

Assignment bottleneck_assignment(const MatrixXd& cost) {
    check_square(cost);
    const int n = static_cast<int>(cost.rows());
    Assignment out;
    if (n == 0) return out;

    std::vector<double> levels(cost.data(), cost.data() + cost.size());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::size_t lo = 0, hi = levels.size() - 1;  // levels[hi] always feasible
    std::vector<int> match_col;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (perfect_matching(cost, levels[mid], match_col))
            hi = mid;
        else
            lo = mid + 1;
    }
    perfect_matching(cost, levels[lo], match_col);
    out.perm.assign(static_cast<std::size_t>(n), -1);
    for (int c = 0; c < n; ++c) out.perm[match_col[c]] = c;
    out.value = levels[lo];
    return out;
}

MatrixXd distance_matrix(const MatrixXd& a, const MatrixXd& b) {
    if (a.cols() != b.cols()) throw DomainError("distance_matrix: dimension mismatch");
    MatrixXd D(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.rows(); ++j) D(i, j) = (a.row(i) - b.row(j)).norm();
    return D;
}

}  // namespace superres
