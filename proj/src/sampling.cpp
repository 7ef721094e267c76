#include "superres/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "superres/kernels.hpp"

namespace superres {

namespace {

void check_unit_interval(double x, const char* name) {
    if (!(x > 0.0 && x < 0.5))
        throw DomainError(std::string(name) + " must lie in (0, 1/2)");
}

VectorXd random_unit_vector(int d, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXd v(d);
    do {
        for (int c = 0; c < d; ++c) v[c] = gauss(rng);
    } while (v.norm() == 0.0);
    return v.normalized();
}

}  // namespace

PointMatrix SamplingPlan::augmented() const {
    PointMatrix s = PointMatrix::Zero(m_prime(), d);
    s.topRows(m) = gaussian_samples;
    s.middleRows(m, d).setIdentity();
    return s;
}

PointMatrix SamplingPlan::projections() const {
    PointMatrix p = PointMatrix::Zero(slice_count, d);
    p.row(0) = v.transpose();
    p.row(1) = 2.0 * v.transpose();
    return p;
}

double choose_cutoff(int d, int k, double delta, double eps_x) {
    if (d < 1 || k < 1) throw DomainError("choose_cutoff: need d >= 1 and k >= 1");
    if (!(delta > 0.0)) throw DomainError("choose_cutoff: separation must be positive");
    check_unit_interval(eps_x, "eps_x");
    const double L = d == 1 ? std::log(1.0 + 2.0 / eps_x) : std::log(k / eps_x);
    return std::sqrt(2.0 * L) / (kPi * delta);
}

int choose_sample_count(int k, double eps_x, double delta_s, int d) {
    if (d < 1 || k < 1) throw DomainError("choose_sample_count: need d >= 1 and k >= 1");
    check_unit_interval(eps_x, "eps_x");
    check_unit_interval(delta_s, "delta_s");
    const double first = (k / eps_x) * std::sqrt(8.0 * std::log(k / delta_s));
    return static_cast<int>(std::ceil(std::max(first, static_cast<double>(d))));
}

SamplingPlan draw_plan(int d, int k, double R, int m, int slice_count, std::uint64_t seed) {
    if (d < 1 || k < 1) throw DomainError("draw_plan: need d >= 1 and k >= 1");
    if (m < d) throw DomainError("draw_plan: need m >= d");
    if (slice_count != 2 && slice_count != 3)
        throw DomainError("draw_plan: slice_count must be 2 or 3");
    if (!(R >= 0.0) || !std::isfinite(R)) throw DomainError("draw_plan: R must be finite, >= 0");

    SamplingPlan plan;
    plan.d = d;
    plan.k = k;
    plan.R = R;
    plan.m = m;
    plan.slice_count = slice_count;
    plan.seed = seed;

    Rng rng(derive_seed(seed, 0x53));
    std::normal_distribution<double> gauss(0.0, 1.0);
    plan.gaussian_samples.resize(m, d);
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < d; ++c) plan.gaussian_samples(i, c) = R * gauss(rng);

    Rng vrng(derive_seed(seed, 0x56));
    plan.v = random_unit_vector(d, vrng);
    return plan;
}

SamplingPlan redraw_projection(const SamplingPlan& plan, std::uint64_t seed) {
    SamplingPlan out = plan;
    Rng rng(derive_seed(seed, 0x56));
    out.v = random_unit_vector(plan.d, rng);
    return out;
}

PointMatrix tensor_frequencies(const SamplingPlan& plan) {
    const PointMatrix S = plan.augmented();
    const PointMatrix V = plan.projections();
    const Eigen::Index mp = S.rows();
    PointMatrix pts(mp * mp * V.rows(), plan.d);
    Eigen::Index row = 0;
    for (Eigen::Index n3 = 0; n3 < V.rows(); ++n3)
        for (Eigen::Index n2 = 0; n2 < mp; ++n2)
            for (Eigen::Index n1 = 0; n1 < mp; ++n1, ++row)
                for (int c = 0; c < plan.d; ++c)
                    pts(row, c) = (S(n1, c) + S(n2, c)) + V(n3, c);
    return pts;
}

MeasurementTensor build_tensor(MeasurementOracle& oracle, const SamplingPlan& plan) {
    if (oracle.dim() != plan.d)
        throw DomainError("build_tensor: oracle dimension does not match the plan");
    const PointMatrix pts = tensor_frequencies(plan);
    const VectorXcd values = oracle.evaluate_batch(pts);

    MeasurementTensor out;
    const Eigen::Index mp = plan.m_prime();
    out.tensor = ComplexTensor3(mp, mp, plan.slice_count);
    std::copy(values.data(), values.data() + values.size(), out.tensor.data());

    // distinct frequencies by bit pattern (-0.0 folded, as in the oracle)
    std::vector<std::vector<std::uint64_t>> keys(static_cast<std::size_t>(pts.rows()));
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        auto& key = keys[static_cast<std::size_t>(i)];
        key.resize(static_cast<std::size_t>(plan.d));
        for (int c = 0; c < plan.d; ++c) {
            const double x = pts(i, c) == 0.0 ? 0.0 : pts(i, c);
            key[c] = std::bit_cast<std::uint64_t>(x);
        }
    }
    std::sort(keys.begin(), keys.end());
    out.distinct_points =
        static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    return out;
}

CutoffReport report_cutoff(const SamplingPlan& plan) {
    CutoffReport r;
    const PointMatrix pts = tensor_frequencies(plan);
    r.per_coordinate = pts.size() == 0 ? 0.0 : pts.cwiseAbs().maxCoeff();
    r.predicted = plan.R * std::sqrt(std::log(static_cast<double>(plan.m) * plan.d));
    return r;
}

MatrixXcd characteristic_matrix(const MatrixXd& locations, const PointMatrix& points) {
    if (locations.cols() != points.cols())
        throw DomainError("characteristic_matrix: dimension mismatch");
    const Eigen::Index k = locations.rows();
    MatrixXcd V(points.rows(), k);
    // column j is evaluate_clean with a single unit weight at mu_j
    const Complex one(1.0, 0.0);
    for (Eigen::Index j = 0; j < k; ++j) {
        const MatrixXd mu = locations.row(j);
        const kernels::PhaseSumArgs args{points.data(),
                                         static_cast<std::size_t>(points.rows()),
                                         static_cast<std::size_t>(points.cols()),
                                         mu.data(),
                                         1,
                                         kPi};
        kernels::weighted_phase_sum(args, &one, V.col(j).data());
    }
    return V;
}

MatrixXd expected_gram_matrix(const SourceSet& source, double R) {
    if (!(R > 0.0)) throw DomainError("expected_gram_matrix: R must be positive");
    const MatrixXd& mu = source.locations();
    const Eigen::Index k = mu.rows();
    MatrixXd Y(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b)
            Y(a, b) = a == b ? 1.0
                             : std::exp(-0.5 * kPi * kPi * R * R *
                                        (mu.row(a) - mu.row(b)).squaredNorm());
    return Y;
}

}  // namespace superres
