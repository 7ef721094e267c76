#include "superres/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace superres {

TruncatedSvd truncated_svd(const MatrixXcd& M, int k) {
    const Eigen::Index n = std::min(M.rows(), M.cols());
    if (k < 1 || k > n)
        throw DomainError("truncated_svd: rank " + std::to_string(k) + " out of range");
    Eigen::BDCSVD<MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& s = svd.singularValues();
    return {svd.matrixU().leftCols(k), s.head(k), svd.matrixV().leftCols(k),
            k < n ? s[k] : 0.0};
}

EigenDecomposition eig_nonsymmetric(const MatrixXcd& M) {
    if (M.rows() != M.cols()) throw DomainError("eig_nonsymmetric: matrix must be square");
    Eigen::ComplexEigenSolver<MatrixXcd> solver(M, true);
    if (solver.info() != Eigen::Success)
        throw KernelError("eig_nonsymmetric: eigenvalue iteration did not converge");

    const Eigen::Index n = M.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const VectorXcd& raw = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(raw[a]);
        const double mb = std::abs(raw[b]);
        if (ma != mb) return ma > mb;
        return std::arg(raw[a]) < std::arg(raw[b]);
    });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values[i] = raw[order[i]];
        out.vectors.col(i) = solver.eigenvectors().col(order[i]).normalized();
    }
    const double scale = M.norm();
    out.relative_residual =
        scale > 0.0 ? (M * out.vectors - out.vectors * out.values.asDiagonal()).norm() / scale
                    : 0.0;
    out.vector_cond = cond2(out.vectors);
    out.flagged = !(out.relative_residual <= 1e-8) || !(out.vector_cond <= 1e6);
    return out;
}

double cond2(const MatrixXcd& M) {
    if (M.size() == 0) return 1.0;
    Eigen::BDCSVD<MatrixXcd> svd(M);
    const VectorXd& s = svd.singularValues();
    const double lo = s[s.size() - 1];
    return lo > 0.0 ? s[0] / lo : std::numeric_limits<double>::infinity();
}

double norm2(const MatrixXcd& M) {
    if (M.size() == 0) return 0.0;
    Eigen::BDCSVD<MatrixXcd> svd(M);
    return svd.singularValues()[0];
}

VectorXd gershgorin_radii(const MatrixXcd& M) {
    VectorXd r(M.rows());
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        r[i] = M.row(i).cwiseAbs().sum() - std::abs(M(i, i));
    return r;
}

bool within_gershgorin(const MatrixXcd& M, const VectorXcd& eigenvalues, double slack) {
    const VectorXd r = gershgorin_radii(M);
    for (Eigen::Index e = 0; e < eigenvalues.size(); ++e) {
        bool inside = false;
        for (Eigen::Index i = 0; i < M.rows() && !inside; ++i)
            inside = std::abs(eigenvalues[e] - M(i, i)) <= r[i] + slack;
        if (!inside) return false;
    }
    return true;
}

}  // namespace superres
