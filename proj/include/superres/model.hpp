#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "superres/types.hpp"

namespace superres {

/// Ground-truth superposition of k weighted Dirac sources in [-1, 1]^d.
///
/// Immutable once constructed. Locations are stored one per row (k x d).
/// Construction validates the normalization: coordinates in [-1, 1],
/// 0 < |w_j| <= 1, and pairwise-distinct locations.
class SourceSet {
public:
    SourceSet(MatrixXd locations, VectorXcd weights);

    int dim() const noexcept { return static_cast<int>(locations_.cols()); }
    int size() const noexcept { return static_cast<int>(locations_.rows()); }

    const MatrixXd& locations() const noexcept { return locations_; }
    const VectorXcd& weights() const noexcept { return weights_; }

    double w_min() const;
    double w_max() const;

private:
    MatrixXd locations_;
    VectorXcd weights_;
};

/// min_{j != j'} ||mu_j - mu_j'||_2; +infinity when fewer than two rows.
double min_separation(const MatrixXd& locations);
inline double min_separation(const SourceSet& s) { return min_separation(s.locations()); }

/// f(s) = sum_j w_j exp(i pi <mu_j, s>), evaluated for every row of `points`.
VectorXcd evaluate_clean(const SourceSet& source, const PointMatrix& points);

/// A measurement function f~(s) that can be queried at arbitrary frequencies.
///
/// Values are memoized per frequency (keyed by the exact bit pattern of s,
/// with -0.0 folded onto +0.0), so a frequency reached by two different index
/// combinations sees one value. Subclasses implement compute(), which must be
/// a deterministic function of s; that makes the observable values independent
/// of query order and safe under concurrent evaluation.
class MeasurementOracle {
public:
    explicit MeasurementOracle(int dim);
    virtual ~MeasurementOracle() = default;

    MeasurementOracle(const MeasurementOracle&) = delete;
    MeasurementOracle& operator=(const MeasurementOracle&) = delete;

    int dim() const noexcept { return dim_; }

    Complex evaluate(std::span<const double> s);

    /// One value per row of `points` (n x dim).
    VectorXcd evaluate_batch(const PointMatrix& points);

    /// Number of distinct frequencies queried so far.
    std::size_t distinct_queries() const;

    void clear_cache();

protected:
    /// Raw measurement for each row of `points`.
    virtual void compute(const PointMatrix& points, Complex* out) = 0;

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint64_t>& k) const noexcept;
    };

    std::vector<std::uint64_t> key_of(const PointMatrix& points, Eigen::Index row) const;

    int dim_;
    mutable std::mutex mutex_;
    std::unordered_map<std::vector<std::uint64_t>, Complex, KeyHash> cache_;
};

enum class NoiseMode { none, uniform_disk, custom };

/// Bounded perturbation hook: receives the frequency, returns z(s). Values
/// with |z| > noise_level are radially clipped onto the disk.
using NoiseFunction = std::function<Complex(std::span<const double>)>;

/// Noisy point-source measurements: f~(s) = f(s) + z(s), |z(s)| <= noise_level.
///
/// In uniform_disk mode z(s) is drawn uniformly from the disk of radius
/// noise_level using a counter-based generator keyed by (seed, bits of s).
class PointSourceOracle final : public MeasurementOracle {
public:
    PointSourceOracle(std::shared_ptr<const SourceSet> source, double noise_level = 0.0,
                      NoiseMode mode = NoiseMode::none, std::uint64_t seed = 0,
                      NoiseFunction custom = {});

    const SourceSet& source() const noexcept { return *source_; }
    double noise_level() const noexcept { return noise_level_; }
    NoiseMode noise_mode() const noexcept { return mode_; }

    /// The perturbation that would be added at s (0 for NoiseMode::none).
    Complex noise_at(std::span<const double> s) const;

protected:
    void compute(const PointMatrix& points, Complex* out) override;

private:
    std::shared_ptr<const SourceSet> source_;
    double noise_level_;
    NoiseMode mode_;
    std::uint64_t seed_;
    NoiseFunction custom_;
};

/// Weight law of random_instance.
struct WeightLaw {
    double magnitude_lo = 0.1;
    double magnitude_hi = 1.1;
    /// Magnitudes above this are clipped (keeps |w| <= 1).
    double magnitude_clip = 1.0;
    bool random_phase = false;
};

/// Random sources in [-1, 1]^d whose minimal separation lies in
/// [delta, 2 * delta]: one pair is placed exactly delta apart (in a uniformly
/// random direction), the rest by rejection sampling with pairwise distance
/// >= delta. Throws InfeasibleSeparationError after `max_retries` attempts or
/// when delta exceeds the diameter of the cube.
SourceSet random_instance(int d, int k, double delta, Rng& rng, const WeightLaw& law = {},
                          int max_retries = 1000);

}  // namespace superres
