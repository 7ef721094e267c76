#include "superres/recovery.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

#include "superres/linalg.hpp"

namespace superres {

namespace {

template <typename Fn>
auto at_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(stage, e.what());
    }
}

}  // namespace

MatrixXcd normalize_columns(const MatrixXcd& V, double norm_tol) {
    if (V.rows() == 0) throw DomainError("normalize_columns: empty factor");
    MatrixXcd out(V.rows(), V.cols());
    const Eigen::Index last = V.rows() - 1;
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        const Complex pivot = V(last, j);
        if (!(std::abs(pivot) >= norm_tol))
            throw VanishingNormalizationError("normalize_columns: column " + std::to_string(j) +
                                              " has a vanishing last entry");
        out.col(j) = V.col(j) / pivot;
        out(last, j) = Complex(1.0, 0.0);
    }
    return out;
}

MatrixXd read_off(const MatrixXcd& V_normalized, int m, int d) {
    if (m < 0 || d < 1 || V_normalized.rows() < m + d)
        throw DomainError("read_off: factor lacks the basis-vector rows");
    const Eigen::Index k = V_normalized.cols();
    MatrixXd mu(k, d);
    for (Eigen::Index j = 0; j < k; ++j)
        for (int n = 0; n < d; ++n) {
            const double x = std::arg(V_normalized(m + n, j)) / kPi;
            mu(j, n) = x <= -1.0 ? 1.0 : x;
        }
    return mu;
}

WeightFit fit_weights(const ComplexTensor3& F, const MatrixXcd& V_normalized,
                      const MatrixXd& mu_hat, const SamplingPlan& plan) {
    const Eigen::Index mp = V_normalized.rows();
    const Eigen::Index k = V_normalized.cols();
    if (F.dim1() != mp || F.dim2() != mp || F.dim3() != plan.slice_count)
        throw DomainError("fit_weights: tensor shape does not match the factor and plan");
    if (mu_hat.rows() != k) throw DomainError("fit_weights: location count mismatch");

    const MatrixXcd V2 = characteristic_matrix(mu_hat, plan.projections());
    const Eigen::Index n = F.size();
    MatrixXcd A(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index row = 0;
        for (Eigen::Index i3 = 0; i3 < F.dim3(); ++i3)
            for (Eigen::Index i2 = 0; i2 < mp; ++i2) {
                const Complex c = V_normalized(i2, j) * V2(i3, j);
                for (Eigen::Index i1 = 0; i1 < mp; ++i1, ++row) A(row, j) = V_normalized(i1, j) * c;
            }
    }
    const Eigen::Map<const VectorXcd> b(F.data(), n);

    WeightFit fit;
    fit.weights = A.colPivHouseholderQr().solve(b);
    fit.residual = (A * fit.weights - b).norm();
    const double bn = b.norm();
    fit.relative_residual = bn > 0.0 ? fit.residual / bn : 0.0;
    fit.normal_cond = cond2(A.adjoint() * A);
    fit.ill_conditioned = !(fit.normal_cond <= 1e8);
    return fit;
}

RecoveryResult recover_from_tensor(const ComplexTensor3& F, const SamplingPlan& plan, int k,
                                   const RecoveryOptions& opts) {
    JennrichOptions jopts;
    jopts.rank_rel_tol = opts.rank_rel_tol;
    jopts.pencil_rel_tol = opts.pencil_rel_tol;
    jopts.sep_tol = opts.sep_tol.value_or(1e-6);
    const JennrichResult jr = at_stage("decompose", [&] { return tensor_decomp(F, k, jopts); });
    const MatrixXcd Vn =
        at_stage("normalize", [&] { return normalize_columns(jr.V, opts.norm_tol); });

    RecoveryResult out;
    out.locations = read_off(Vn, plan.m, plan.d);
    const WeightFit fit = at_stage("fit", [&] { return fit_weights(F, Vn, out.locations, plan); });
    out.weights = fit.weights;

    auto& diag = out.diagnostics;
    diag.decomposition = jr.diagnostics;
    diag.R = plan.R;
    diag.m = plan.m;
    diag.m_prime = plan.m_prime();
    diag.slice_count = plan.slice_count;
    diag.plan_seed = plan.seed;
    diag.sep_tol = jopts.sep_tol;
    for (Eigen::Index j = 0; j < Vn.cols(); ++j)
        for (int n = 0; n < plan.d; ++n)
            diag.max_modulus_deviation =
                std::max(diag.max_modulus_deviation, std::abs(std::abs(Vn(plan.m + n, j)) - 1.0));
    diag.weight_residual = fit.residual;
    diag.weight_relative_residual = fit.relative_residual;
    diag.weight_normal_cond = fit.normal_cond;
    diag.weight_ill_conditioned = fit.ill_conditioned;
    return out;
}

RecoveryResult recover(MeasurementOracle& oracle, int d, int k, double delta_hint,
                       const RecoveryOptions& opts, Rng& rng) {
    if (oracle.dim() != d) throw DomainError("recover: oracle dimension differs from d");
    const auto [R, m, sep_tol] = at_stage("parameters", [&] {
        if (!(delta_hint > 0.0)) throw DomainError("separation hint must be positive");
        const double R = opts.R ? *opts.R : choose_cutoff(d, k, delta_hint, opts.eps_x);
        const int m = opts.m ? *opts.m : choose_sample_count(k, opts.eps_x, opts.delta_s, d);
        const double tol = opts.sep_tol ? *opts.sep_tol
                                        : sep_lower_bound(delta_hint, d, k, opts.delta_v);
        return std::tuple{R, m, tol};
    });

    const std::uint64_t plan_seed = rng();
    SamplingPlan plan =
        at_stage("parameters", [&] { return draw_plan(d, k, R, m, opts.slice_count, plan_seed); });

    RecoveryOptions inner = opts;
    inner.sep_tol = sep_tol;
    for (int attempt = 0;; ++attempt) {
        const MeasurementTensor mt = at_stage("measure", [&] { return build_tensor(oracle, plan); });
        RecoveryResult out = recover_from_tensor(mt.tensor, plan, k, inner);
        const bool retry = out.diagnostics.decomposition.ill_separated && attempt < opts.max_redraws;
        if (!retry) {
            out.diagnostics.v_redraws = attempt;
            out.diagnostics.distinct_measurements = mt.distinct_points;
            out.diagnostics.per_coordinate_cutoff = report_cutoff(plan).per_coordinate;
            return out;
        }
        plan = redraw_projection(plan, derive_seed(plan_seed, 0x7265, attempt + 1));
    }
}

Assignment matched_error(const MatrixXd& truth, const MatrixXd& estimate) {
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
        throw DomainError("matched_error: truth and estimate differ in size");
    return bottleneck_assignment(distance_matrix(estimate, truth));
}

Assignment sum_matched_error(const MatrixXd& truth, const MatrixXd& estimate) {
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
        throw DomainError("sum_matched_error: truth and estimate differ in size");
    return min_sum_assignment(distance_matrix(estimate, truth));
}

void score_against(RecoveryResult& result, const SourceSet& truth) {
    const Assignment a = matched_error(truth.locations(), result.locations);
    result.matched_error = a.value;
    result.permutation = a.perm;
    double werr = 0.0;
    for (std::size_t j = 0; j < a.perm.size(); ++j)
        werr = std::max(werr, std::abs(result.weights[static_cast<Eigen::Index>(j)] -
                                       truth.weights()[a.perm[j]]));
    result.weight_error = werr;
}

}  // namespace superres
