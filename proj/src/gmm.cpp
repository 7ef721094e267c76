#include "superres/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "superres/kernels.hpp"

namespace superres {

namespace {

double envelope_exponent(double sigma, std::span<const double> s) {
    double sq = 0.0;
    for (double x : s) sq += x * x;
    return 0.5 * kPi * kPi * sigma * sigma * sq;
}

}  // namespace

double GmmModel::separation() const { return min_separation(means) / sigma; }

void GmmModel::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("GmmModel: sigma must be > 0");
    if (means.rows() < 1 || means.cols() < 1) throw DomainError("GmmModel: empty model");
    if (weights.size() != means.rows())
        throw DomainError("GmmModel: weight count does not match component count");
    if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-9)
        throw DomainError("GmmModel: weights must lie on the simplex");
}

PointMatrix sample_gmm(const GmmModel& model, std::size_t N, Rng& rng) {
    model.validate();
    if (N < 1) throw DomainError("sample_gmm: need N >= 1");
    const int d = model.dim();
    std::discrete_distribution<int> pick(model.weights.data(),
                                         model.weights.data() + model.weights.size());
    std::normal_distribution<double> gauss(0.0, 1.0);
    PointMatrix x(static_cast<Eigen::Index>(N), d);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int j = pick(rng);
        for (int c = 0; c < d; ++c) x(i, c) = model.means(j, c) + model.sigma * gauss(rng);
    }
    return x;
}

VectorXcd empirical_cf(const PointMatrix& samples, const PointMatrix& points) {
    if (samples.cols() != points.cols()) throw DomainError("empirical_cf: dimension mismatch");
    if (samples.rows() == 0) throw DomainError("empirical_cf: no samples");
    VectorXcd out(points.rows());
    const kernels::PhaseSumArgs args{points.data(),
                                     static_cast<std::size_t>(points.rows()),
                                     static_cast<std::size_t>(points.cols()),
                                     samples.data(),
                                     static_cast<std::size_t>(samples.rows()),
                                     1.0};
    kernels::mean_phase(args, out.data());
    return out;
}

Complex empirical_cf(const PointMatrix& samples, std::span<const double> s) {
    PointMatrix p(1, static_cast<Eigen::Index>(s.size()));
    for (std::size_t c = 0; c < s.size(); ++c) p(0, static_cast<Eigen::Index>(c)) = s[c];
    return empirical_cf(samples, p)[0];
}

DeconvolvedOracle::DeconvolvedOracle(std::shared_ptr<const PointMatrix> samples, double sigma)
    : MeasurementOracle(samples ? static_cast<int>(samples->cols()) : 0),
      samples_(std::move(samples)),
      sigma_(sigma) {
    if (samples_->rows() < 1) throw DomainError("DeconvolvedOracle: no samples");
    if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
        throw DomainError("DeconvolvedOracle: sigma must be positive");
}

double DeconvolvedOracle::noise_proxy(std::span<const double> s) const {
    return std::exp(envelope_exponent(sigma_, s)) /
           std::sqrt(static_cast<double>(samples_->rows()));
}

double DeconvolvedOracle::max_noise_proxy() const {
    std::lock_guard lock(proxy_mutex_);
    return max_proxy_;
}

void DeconvolvedOracle::compute(const PointMatrix& points, Complex* out) {
    std::vector<double> exponent(static_cast<std::size_t>(points.rows()));
    std::vector<double> s(static_cast<std::size_t>(points.cols()));
    double worst = 0.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index c = 0; c < points.cols(); ++c) s[c] = points(i, c);
        exponent[i] = envelope_exponent(sigma_, s);
        if (exponent[i] > kMaxExponent)
            throw DomainError("deconvolution overflow: pi^2 sigma^2 |s|^2 / 2 = " +
                              std::to_string(exponent[i]) + " exceeds " +
                              std::to_string(kMaxExponent) + " (sigma = " +
                              std::to_string(sigma_) + ")");
        worst = std::max(worst, exponent[i]);
    }
    const PointMatrix scaled = kPi * points;
    const VectorXcd cf = empirical_cf(*samples_, scaled);
    for (Eigen::Index i = 0; i < points.rows(); ++i) out[i] = std::exp(exponent[i]) * cf[i];

    const double proxy = std::exp(worst) / std::sqrt(static_cast<double>(samples_->rows()));
    std::lock_guard lock(proxy_mutex_);
    max_proxy_ = std::max(max_proxy_, proxy);
}

GmmFit learn_gmm(const PointMatrix& samples, int k, const std::vector<double>& sigma_grid,
                 double delta_G_hint, Rng& rng, const RecoveryOptions& opts) {
    if (sigma_grid.empty()) throw DomainError("learn_gmm: empty sigma grid");
    if (samples.rows() < 1) throw DomainError("learn_gmm: no samples");
    if (!(delta_G_hint > 0.0)) throw DomainError("learn_gmm: separation hint must be positive");
    const auto shared = std::make_shared<const PointMatrix>(samples);
    const int d = static_cast<int>(samples.cols());

    GmmFit fit;
    double best = std::numeric_limits<double>::infinity();
    std::string failures;
    for (double sigma : sigma_grid) {
        SigmaTrial trial;
        trial.sigma = sigma;
        try {
            DeconvolvedOracle oracle(shared, sigma);
            RecoveryResult r = recover(oracle, d, k, sigma * delta_G_hint, opts, rng);
            trial.max_noise_proxy = oracle.max_noise_proxy();
            trial.residual = r.diagnostics.weight_residual;

            VectorXd w = r.weights.real().cwiseMax(0.0);
            trial.clipped_weights = static_cast<int>((r.weights.real().array() < 0.0).count());
            const double total = w.sum();
            if (!(total > 0.0)) throw PipelineError("gmm", "all estimated weights are nonpositive");
            trial.estimate = GmmModel{r.locations, sigma, w / total};
            trial.ok = true;
        } catch (const Error& e) {
            trial.error = e.what();
            failures += "\n  sigma=" + std::to_string(sigma) + ": " + e.what();
        }
        if (trial.ok && trial.residual < best) {
            best = trial.residual;
            fit.selected = fit.trials.size();
        }
        fit.trials.push_back(std::move(trial));
    }
    if (!std::isfinite(best)) throw PipelineError("gmm", "every sigma candidate failed:" + failures);
    fit.model = fit.trials[fit.selected].estimate;
    return fit;
}

}  // namespace superres
