#pragma once

// Spherical Gaussian mixtures through the point-source pipeline: the
// empirical characteristic function, multiplied by the inverse Gaussian
// envelope, is a noisy measurement function of the component means.

#include <memory>
#include <string>
#include <vector>

#include "superres/model.hpp"
#include "superres/recovery.hpp"
#include "superres/types.hpp"

namespace superres {

struct GmmModel {
    MatrixXd means;   ///< k x d
    double sigma = 0.0;
    VectorXd weights; ///< on the simplex

    int dim() const noexcept { return static_cast<int>(means.cols()); }
    int size() const noexcept { return static_cast<int>(means.rows()); }

    /// min pairwise mean distance divided by sigma.
    double separation() const;

    /// Throws DomainError unless sigma > 0 and weights lie on the simplex.
    void validate() const;
};

/// N draws, one per row: component by weight, then N(mean, sigma^2 I).
PointMatrix sample_gmm(const GmmModel& model, std::size_t N, Rng& rng);

/// phi_hat(s) = (1/N) sum_l exp(i <x_l, s>).
Complex empirical_cf(const PointMatrix& samples, std::span<const double> s);

/// phi_hat at every row of `points` (vectorized over the samples).
VectorXcd empirical_cf(const PointMatrix& samples, const PointMatrix& points);

/// f~(s) = exp(pi^2 sigma^2 ||s||^2 / 2) * phi_hat(pi s).
///
/// Throws DomainError when the exponent exceeds 700 (the amplification would
/// overflow double precision).
class DeconvolvedOracle final : public MeasurementOracle {
public:
    DeconvolvedOracle(std::shared_ptr<const PointMatrix> samples, double sigma);

    double sigma() const noexcept { return sigma_; }

    /// exp(pi^2 sigma^2 ||s||^2 / 2) / sqrt(N): the noise scale at s.
    double noise_proxy(std::span<const double> s) const;

    /// Largest noise_proxy over everything queried so far.
    double max_noise_proxy() const;

    static constexpr double kMaxExponent = 700.0;

protected:
    void compute(const PointMatrix& points, Complex* out) override;

private:
    std::shared_ptr<const PointMatrix> samples_;
    double sigma_;
    mutable std::mutex proxy_mutex_;
    double max_proxy_ = 0.0;
};

struct SigmaTrial {
    double sigma = 0.0;
    bool ok = false;
    std::string error;
    double residual = 0.0;  ///< absolute weight-fit residual
    double max_noise_proxy = 0.0;
    GmmModel estimate;
    int clipped_weights = 0;
};

struct GmmFit {
    GmmModel model;
    std::vector<SigmaTrial> trials;
    std::size_t selected = 0;
};

/// Grid search over sigma: each candidate runs the recovery pipeline on the
/// deconvolved oracle with delta_hint = sigma * delta_G_hint; the candidate
/// with the smallest absolute weight-fit residual wins. Estimated weights are
/// reduced to their real parts, clipped at 0 and renormalized. Throws
/// PipelineError("gmm", ...) if every candidate fails.
GmmFit learn_gmm(const PointMatrix& samples, int k, const std::vector<double>& sigma_grid,
                 double delta_G_hint, Rng& rng, const RecoveryOptions& opts = {});

}  // namespace superres
