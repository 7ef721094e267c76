#pragma once

#include <cstdint>

#include "superres/model.hpp"
#include "superres/tensor.hpp"
#include "superres/types.hpp"

namespace superres {

/// Random frequency set S, its augmentation S', and the projection vectors.
///
/// Row order of S' is part of the contract: rows [0, m) are the Gaussian
/// samples, rows [m, m + d) the standard basis e_1..e_d, row m + d is zero.
struct SamplingPlan {
    int d = 0;
    int k = 0;
    double R = 0.0;
    int m = 0;
    int slice_count = 2;
    std::uint64_t seed = 0;
    PointMatrix gaussian_samples;  ///< m x d
    VectorXd v;                    ///< unit vector

    int m_prime() const noexcept { return m + d + 1; }

    /// S' as an m' x d matrix.
    PointMatrix augmented() const;

    /// Projection vectors as rows: v, 2v and, when slice_count == 3, 0.
    PointMatrix projections() const;
};

/// Cutoff scale at the lower bound of the theorem:
///   d == 1: sqrt(2 log(1 + 2/eps_x)) / (pi delta)
///   d >= 2: sqrt(2 log(k/eps_x)) / (pi delta)
double choose_cutoff(int d, int k, double delta, double eps_x);

/// m = ceil(max{(k/eps_x) sqrt(8 log(k/delta_s)), d}).
int choose_sample_count(int k, double eps_x, double delta_s, int d);

/// Draws S ~ N(0, R^2 I) and v uniform on the sphere (independent of S).
/// Deterministic in `seed`.
SamplingPlan draw_plan(int d, int k, double R, int m, int slice_count, std::uint64_t seed);

/// Same plan with a fresh projection direction (S unchanged).
SamplingPlan redraw_projection(const SamplingPlan& plan, std::uint64_t seed);

/// All tensor frequencies s_n1 + s_n2 + v_n3, one per row, in tensor storage
/// order (n1 fastest, then n2, then n3).
PointMatrix tensor_frequencies(const SamplingPlan& plan);

struct MeasurementTensor {
    ComplexTensor3 tensor;             ///< m' x m' x slice_count
    std::size_t distinct_points = 0;   ///< distinct frequencies queried
};

MeasurementTensor build_tensor(MeasurementOracle& oracle, const SamplingPlan& plan);

struct CutoffReport {
    double per_coordinate = 0.0;  ///< max ||s||_inf over queried frequencies
    double predicted = 0.0;       ///< R sqrt(log(m d)), the predicted order
};

CutoffReport report_cutoff(const SamplingPlan& plan);

/// Characteristic matrix V[s, j] = exp(i pi <mu_j, s>) for rows s of `points`.
MatrixXcd characteristic_matrix(const MatrixXd& locations, const PointMatrix& points);

/// E_s[X_s] for s ~ N(0, R^2 I): Y[j, j'] = exp(-pi^2 R^2 ||mu_j - mu_j'||^2 / 2).
MatrixXd expected_gram_matrix(const SourceSet& source, double R);

}  // namespace superres
