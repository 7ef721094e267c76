#include "superres/jennrich.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>

#include "superres/linalg.hpp"

namespace superres {

Whitening svd_whiten(const ComplexTensor3& F, int k) {
    if (F.dim1() != F.dim2()) throw DomainError("svd_whiten: frontal slices must be square");
    if (F.dim3() < 1) throw DomainError("svd_whiten: tensor has no slices");
    if (k < 1 || k > F.dim1())
        throw DomainError("svd_whiten: need 1 <= k <= m, got k = " + std::to_string(k));
    const MatrixXcd F1 = slice(F, 0);
    TruncatedSvd svd = truncated_svd(F1, k);
    Whitening w;
    w.residual = norm2(F1 - svd.P * svd.sigma.asDiagonal() * svd.Q.adjoint());
    w.P = std::move(svd.P);
    w.sigma = std::move(svd.sigma);
    w.sigma_next = svd.sigma_next;
    return w;
}

double eigen_separation(const VectorXcd& values) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < values.size(); ++a)
        for (Eigen::Index b = a + 1; b < values.size(); ++b)
            best = std::min(best, std::abs(values[a] - values[b]));
    return best;
}

PencilEigen eigen_pencil(const MatrixXcd& E1, const MatrixXcd& E2, double pencil_rel_tol,
                         double sep_tol) {
    if (E1.rows() != E1.cols() || E2.rows() != E2.cols() || E1.rows() != E2.rows())
        throw DomainError("eigen_pencil: need two square matrices of equal size");
    PencilEigen out;
    Eigen::BDCSVD<MatrixXcd> svd(E2);
    const VectorXd& s = svd.singularValues();
    out.sigma_min_E2 = s[s.size() - 1];
    if (!(s[0] > 0.0) || out.sigma_min_E2 < pencil_rel_tol * s[0])
        throw SingularPencilError("eigen_pencil: second slice is numerically singular (sigma_min " +
                                  std::to_string(out.sigma_min_E2) + ")");

    // M = E1 E2^{-1}  <=>  E2^T M^T = E1^T
    const MatrixXcd M = E2.transpose().fullPivLu().solve(E1.transpose()).transpose();
    EigenDecomposition eig = eig_nonsymmetric(M);
    out.U = std::move(eig.vectors);
    out.eigenvalues = std::move(eig.values);
    out.residual = eig.relative_residual;
    out.flagged = eig.flagged;
    out.sep_D = eigen_separation(out.eigenvalues);
    out.ill_separated = out.sep_D < sep_tol;
    return out;
}

JennrichResult tensor_decomp(const ComplexTensor3& F, int k, const JennrichOptions& opts) {
    if (F.dim3() < 2) throw DomainError("tensor_decomp: slices 1 and 2 are required");
    Whitening w = svd_whiten(F, k);

    DecompositionDiagnostics diag;
    diag.sigma_k = w.sigma[k - 1];
    diag.sigma_k1 = w.sigma_next;
    diag.whitening_residual = w.residual;
    if (!(w.sigma[0] > 0.0) || diag.sigma_k < opts.rank_rel_tol * w.sigma[0])
        throw RankDeficiencyError("tensor_decomp: sigma_k = " + std::to_string(diag.sigma_k) +
                                  " below rank tolerance (sigma_1 = " +
                                  std::to_string(w.sigma[0]) + ")");

    const MatrixXcd Pc = w.P.conjugate();
    const MatrixXcd E1 = Pc.transpose() * slice(F, 0) * Pc;
    const MatrixXcd E2 = Pc.transpose() * slice(F, 1) * Pc;
    PencilEigen pencil = eigen_pencil(E1, E2, opts.pencil_rel_tol, opts.sep_tol);

    diag.pencil_sigma_min = pencil.sigma_min_E2;
    diag.sep_D = pencil.sep_D;
    diag.eig_residual = pencil.residual;
    diag.ill_separated = pencil.ill_separated;
    diag.eig_flagged = pencil.flagged;

    JennrichResult out;
    out.V = std::sqrt(static_cast<double>(F.dim1())) * (w.P * pencil.U);
    out.eigenvalues = std::move(pencil.eigenvalues);
    diag.cond_V = cond2(out.V);
    out.diagnostics = diag;
    return out;
}

double sep_lower_bound(double delta, int d, int k, double delta_v) {
    if (!(delta > 0.0) || d < 1 || k < 1 || !(delta_v > 0.0 && delta_v < 1.0))
        throw DomainError("sep_lower_bound: inputs must be positive and delta_v in (0, 1)");
    return delta * delta_v / (std::sqrt(static_cast<double>(d)) * k * k);
}

}  // namespace superres
