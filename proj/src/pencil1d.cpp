#include "superres/pencil1d.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

#include "superres/jennrich.hpp"
#include "superres/linalg.hpp"
#include "superres/tensor.hpp"

namespace superres {

HankelPair build_hankel(MeasurementOracle& oracle, int m) {
    if (oracle.dim() != 1) throw DomainError("build_hankel: oracle must be one-dimensional");
    if (m < 1) throw DomainError("build_hankel: need m >= 1");
    PointMatrix freqs(2 * m, 1);
    for (int n = 0; n < 2 * m; ++n) freqs(n, 0) = n;
    const VectorXcd f = oracle.evaluate_batch(freqs);

    HankelPair pair{MatrixXcd(m, m), MatrixXcd(m, m)};
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            pair.H0(i, j) = f[i + j];
            pair.H1(i, j) = f[i + j + 1];
        }
    return pair;
}

PencilResult pencil_recover(const HankelPair& pair, int k, double sep_tol) {
    const Eigen::Index m = pair.H0.rows();
    if (pair.H0.cols() != m || pair.H1.rows() != m || pair.H1.cols() != m)
        throw DomainError("pencil_recover: Hankel matrices must be square and equal in size");
    if (k < 1 || k > m) throw DomainError("pencil_recover: need 1 <= k <= m");

    // H0 = V Dw V^T and H1 = V (Dw Dmu) V^T, so the decomposition's pencil
    // H0 H1^{-1} has eigenvalues 1 / lambda_j.
    JennrichOptions opts;
    opts.sep_tol = 0.0;
    const JennrichResult jr =
        tensor_decomp(ComplexTensor3::from_slices({pair.H0, pair.H1}), k, opts);

    PencilResult out;
    out.sigma_k = jr.diagnostics.sigma_k;
    out.nodes = jr.eigenvalues.cwiseInverse();
    out.sep = eigen_separation(out.nodes);
    out.collision_warning = out.sep < sep_tol;
    out.locations.resize(k, 1);
    for (int j = 0; j < k; ++j) {
        const double x = std::arg(out.nodes[j]) / kPi;
        out.locations(j, 0) = x <= -1.0 ? 1.0 : x;
    }

    // f(n) = sum_j w_j exp(i pi n mu_j) for n = 0..2m-1
    const Eigen::Index samples = 2 * m;
    VectorXcd f(samples);
    for (Eigen::Index n = 0; n < m; ++n) f[n] = pair.H0(0, n);
    for (Eigen::Index n = m; n < samples; ++n) f[n] = pair.H1(m - 1, n - m);
    const MatrixXcd A = vandermonde(out.locations.col(0), static_cast<int>(samples));
    out.weights = A.colPivHouseholderQr().solve(f);
    return out;
}

MatrixXcd vandermonde(const VectorXd& locations, int m) {
    if (m < 1) throw DomainError("vandermonde: need m >= 1");
    MatrixXcd V(m, locations.size());
    for (Eigen::Index j = 0; j < locations.size(); ++j)
        for (int n = 0; n < m; ++n) V(n, j) = std::polar(1.0, kPi * n * locations[j]);
    return V;
}

double vandermonde_cond(const VectorXd& locations, int m) {
    if (m < locations.size()) throw DomainError("vandermonde_cond: need m >= k");
    return cond2(vandermonde(locations, m));
}

}  // namespace superres
