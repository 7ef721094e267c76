#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "superres/assignment.hpp"
#include "superres/jennrich.hpp"
#include "superres/model.hpp"
#include "superres/sampling.hpp"

namespace superres {

struct RecoveryOptions {
    double eps_x = 0.25;
    double delta_s = 0.1;
    double delta_v = 0.1;
    int slice_count = 2;
    /// Fixed cutoff / sample count instead of the theorem's choices.
    std::optional<double> R;
    std::optional<int> m;
    /// Defaults to sep_lower_bound(delta_hint, d, k, delta_v).
    std::optional<double> sep_tol;
    int max_redraws = 3;
    double norm_tol = 1e-6;
    double rank_rel_tol = 1e-8;
    double pencil_rel_tol = 1e-10;
};

struct WeightFit {
    VectorXcd weights;
    double residual = 0.0;           ///< ||F - model(w)||_F
    double relative_residual = 0.0;  ///< residual / ||F||_F
    double normal_cond = 0.0;        ///< cond_2 of the normal matrix A^H A
    bool ill_conditioned = false;    ///< normal_cond > 1e8
};

struct RecoveryDiagnostics {
    DecompositionDiagnostics decomposition;
    double R = 0.0;
    int m = 0;
    int m_prime = 0;
    int slice_count = 0;
    std::uint64_t plan_seed = 0;
    std::size_t distinct_measurements = 0;
    double per_coordinate_cutoff = 0.0;
    double sep_tol = 0.0;
    int v_redraws = 0;
    /// Largest | |V(m+n, j)| - 1 | over the basis rows after normalization.
    double max_modulus_deviation = 0.0;
    double weight_residual = 0.0;
    double weight_relative_residual = 0.0;
    double weight_normal_cond = 0.0;
    bool weight_ill_conditioned = false;
};

struct RecoveryResult {
    MatrixXd locations;  ///< k x d, coordinates in (-1, 1]
    VectorXcd weights;
    RecoveryDiagnostics diagnostics;

    // Filled by score_against() when ground truth is known.
    std::optional<double> matched_error;
    std::optional<double> weight_error;
    std::vector<int> permutation;  ///< estimate j matched to truth permutation[j]
};

/// Runs the full pipeline: parameter choice, sampling, tensor assembly,
/// decomposition (redrawing v up to max_redraws times while sep(D) is below
/// sep_tol), normalization, read-off and weight fit. `delta_hint` sets R and
/// m unless overridden. Failures are rethrown as PipelineError naming the
/// stage: "parameters", "measure", "decompose", "normalize" or "fit".
RecoveryResult recover(MeasurementOracle& oracle, int d, int k, double delta_hint,
                       const RecoveryOptions& opts, Rng& rng);

/// Decomposition onwards, on an already measured tensor.
RecoveryResult recover_from_tensor(const ComplexTensor3& F, const SamplingPlan& plan, int k,
                                   const RecoveryOptions& opts);

/// Divides every column by its last entry. Throws VanishingNormalizationError
/// when that entry has modulus below norm_tol.
MatrixXcd normalize_columns(const MatrixXcd& V, double norm_tol = 1e-6);

/// mu_n^(j) = arg(V(m + n, j)) / pi with the principal argument; -1 is
/// reported as +1 (the two are aliased by exp(i pi mu)).
MatrixXd read_off(const MatrixXcd& V_normalized, int m, int d);

/// Least-squares weights for F ~= V (x) V (x) (V2 Diag(w)), V2 rebuilt from
/// mu_hat and the plan's projection vectors.
WeightFit fit_weights(const ComplexTensor3& F, const MatrixXcd& V_normalized,
                      const MatrixXd& mu_hat, const SamplingPlan& plan);

/// min over permutations of max_j ||est_j - truth_perm(j)||_2.
Assignment matched_error(const MatrixXd& truth, const MatrixXd& estimate);

/// Sum of distances under the minimum-sum matching.
Assignment sum_matched_error(const MatrixXd& truth, const MatrixXd& estimate);

/// Fills matched_error, permutation and weight_error.
void score_against(RecoveryResult& result, const SourceSet& truth);

}  // namespace superres
