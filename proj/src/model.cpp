#include "superres/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "superres/kernels.hpp"

namespace superres {

namespace {

std::uint64_t canonical_bits(double x) noexcept {
    if (x == 0.0) x = 0.0;  // fold -0.0 onto +0.0
    return std::bit_cast<std::uint64_t>(x);
}

double unit_uniform(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

SourceSet::SourceSet(MatrixXd locations, VectorXcd weights)
    : locations_(std::move(locations)), weights_(std::move(weights)) {
    if (locations_.rows() == 0 || locations_.cols() == 0)
        throw DomainError("SourceSet: need k >= 1 sources and d >= 1");
    if (weights_.size() != locations_.rows())
        throw DomainError("SourceSet: weight count does not match location count");
    if (!locations_.allFinite() || locations_.cwiseAbs().maxCoeff() > 1.0)
        throw DomainError("SourceSet: locations must lie in [-1, 1]^d");
    for (Eigen::Index j = 0; j < weights_.size(); ++j) {
        const double mag = std::abs(weights_[j]);
        if (!(mag > 0.0) || mag > 1.0)
            throw DomainError("SourceSet: weight magnitudes must lie in (0, 1]");
    }
    if (!(min_separation(locations_) > 0.0))
        throw DomainError("SourceSet: source locations must be pairwise distinct");
}

double SourceSet::w_min() const { return weights_.cwiseAbs().minCoeff(); }
double SourceSet::w_max() const { return weights_.cwiseAbs().maxCoeff(); }

double min_separation(const MatrixXd& locations) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < locations.rows(); ++a)
        for (Eigen::Index b = a + 1; b < locations.rows(); ++b)
            best = std::min(best, (locations.row(a) - locations.row(b)).norm());
    return best;
}

VectorXcd evaluate_clean(const SourceSet& source, const PointMatrix& points) {
    if (points.cols() != source.dim())
        throw DomainError("evaluate: frequency dimension does not match the source set");
    VectorXcd out(points.rows());
    const kernels::PhaseSumArgs args{points.data(),
                                     static_cast<std::size_t>(points.rows()),
                                     static_cast<std::size_t>(points.cols()),
                                     source.locations().data(),
                                     static_cast<std::size_t>(source.size()),
                                     kPi};
    kernels::weighted_phase_sum(args, source.weights().data(), out.data());
    return out;
}

// ---------------------------------------------------------------------------

MeasurementOracle::MeasurementOracle(int dim) : dim_(dim) {
    if (dim < 1) throw DomainError("MeasurementOracle: dimension must be positive");
}

std::size_t MeasurementOracle::KeyHash::operator()(
    const std::vector<std::uint64_t>& k) const noexcept {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (auto v : k) h = splitmix64(h ^ v);
    return static_cast<std::size_t>(h);
}

std::vector<std::uint64_t> MeasurementOracle::key_of(const PointMatrix& points,
                                                     Eigen::Index row) const {
    std::vector<std::uint64_t> key(static_cast<std::size_t>(dim_));
    for (int c = 0; c < dim_; ++c) key[c] = canonical_bits(points(row, c));
    return key;
}

Complex MeasurementOracle::evaluate(std::span<const double> s) {
    if (static_cast<int>(s.size()) != dim_)
        throw DomainError("evaluate: frequency has wrong dimension");
    PointMatrix p(1, dim_);
    for (int c = 0; c < dim_; ++c) p(0, c) = s[c];
    return evaluate_batch(p)[0];
}

VectorXcd MeasurementOracle::evaluate_batch(const PointMatrix& points) {
    if (points.cols() != dim_)
        throw DomainError("evaluate_batch: frequency dimension mismatch");
    if (!points.allFinite()) throw DomainError("evaluate_batch: frequencies must be finite");

    const Eigen::Index n = points.rows();
    VectorXcd out(n);
    std::vector<std::vector<std::uint64_t>> keys(static_cast<std::size_t>(n));
    // rows still needing a value, deduplicated within this batch
    std::unordered_map<std::vector<std::uint64_t>, Eigen::Index, KeyHash> pending;
    std::vector<Eigen::Index> pending_rows;
    {
        std::lock_guard lock(mutex_);
        for (Eigen::Index i = 0; i < n; ++i) {
            keys[i] = key_of(points, i);
            if (auto it = cache_.find(keys[i]); it != cache_.end()) {
                out[i] = it->second;
            } else if (pending.emplace(keys[i], static_cast<Eigen::Index>(pending_rows.size()))
                           .second) {
                pending_rows.push_back(i);
            }
        }
    }
    if (pending_rows.empty()) return out;

    PointMatrix missing(static_cast<Eigen::Index>(pending_rows.size()), dim_);
    for (std::size_t r = 0; r < pending_rows.size(); ++r)
        missing.row(static_cast<Eigen::Index>(r)) = points.row(pending_rows[r]);
    std::vector<Complex> values(pending_rows.size());
    compute(missing, values.data());

    std::lock_guard lock(mutex_);
    for (std::size_t r = 0; r < pending_rows.size(); ++r) {
        // A concurrent caller may have inserted first; both computed the same value.
        auto [it, inserted] = cache_.emplace(keys[pending_rows[r]], values[r]);
        values[r] = it->second;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (auto it = pending.find(keys[i]); it != pending.end()) out[i] = values[it->second];
    }
    return out;
}

std::size_t MeasurementOracle::distinct_queries() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

void MeasurementOracle::clear_cache() {
    std::lock_guard lock(mutex_);
    cache_.clear();
}

// ---------------------------------------------------------------------------

PointSourceOracle::PointSourceOracle(std::shared_ptr<const SourceSet> source, double noise_level,
                                     NoiseMode mode, std::uint64_t seed, NoiseFunction custom)
    : MeasurementOracle(source ? source->dim() : 0),
      source_(std::move(source)),
      noise_level_(noise_level),
      mode_(mode),
      seed_(seed),
      custom_(std::move(custom)) {
    if (!(noise_level_ >= 0.0) || !std::isfinite(noise_level_))
        throw DomainError("PointSourceOracle: noise level must be finite and >= 0");
    if (mode_ == NoiseMode::custom && !custom_)
        throw DomainError("PointSourceOracle: custom noise mode needs a noise function");
}

Complex PointSourceOracle::noise_at(std::span<const double> s) const {
    switch (mode_) {
        case NoiseMode::none:
            return {0.0, 0.0};
        case NoiseMode::uniform_disk: {
            std::uint64_t h = splitmix64(seed_ ^ 0x6a09e667f3bcc909ULL);
            for (double x : s) h = splitmix64(h ^ canonical_bits(x));
            const double radius = noise_level_ * std::sqrt(unit_uniform(splitmix64(h)));
            const double angle = 2.0 * kPi * unit_uniform(splitmix64(h + 1));
            return std::polar(radius, angle);
        }
        case NoiseMode::custom: {
            const Complex z = custom_(s);
            const double mag = std::abs(z);
            if (!std::isfinite(mag)) throw DomainError("custom noise returned a non-finite value");
            return mag > noise_level_ ? z * (noise_level_ / mag) : z;
        }
    }
    return {0.0, 0.0};
}

void PointSourceOracle::compute(const PointMatrix& points, Complex* out) {
    const VectorXcd clean = evaluate_clean(*source_, points);
    std::vector<double> s(static_cast<std::size_t>(points.cols()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        out[i] = clean[i];
        if (mode_ == NoiseMode::none) continue;
        for (Eigen::Index c = 0; c < points.cols(); ++c) s[c] = points(i, c);
        out[i] += noise_at(s);
    }
}

// ---------------------------------------------------------------------------

SourceSet random_instance(int d, int k, double delta, Rng& rng, const WeightLaw& law,
                          int max_retries) {
    if (d < 1 || k < 1) throw DomainError("random_instance: need d >= 1 and k >= 1");
    if (!(delta > 0.0)) throw DomainError("random_instance: separation must be positive");
    if (k >= 2 && delta > 2.0 * std::sqrt(static_cast<double>(d)))
        throw InfeasibleSeparationError("random_instance: separation " + std::to_string(delta) +
                                        " exceeds the diameter of [-1,1]^" + std::to_string(d));

    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> magnitude(law.magnitude_lo, law.magnitude_hi);
    std::uniform_real_distribution<double> phase(-kPi, kPi);

    const auto in_box = [](const Eigen::RowVectorXd& p) { return p.cwiseAbs().maxCoeff() <= 1.0; };
    const auto draw_point = [&] {
        Eigen::RowVectorXd p(d);
        for (int c = 0; c < d; ++c) p[c] = coord(rng);
        return p;
    };
    // keeps the computed pair distance >= delta under rounding
    const double pair_distance = delta * (1.0 + 1e-12);
    constexpr int kPointAttempts = 20000;

    for (int attempt = 0; attempt < max_retries; ++attempt) {
        MatrixXd loc(k, d);
        loc.row(0) = draw_point();
        int placed = 1;
        if (k >= 2) {
            Eigen::RowVectorXd dir(d);
            for (int c = 0; c < d; ++c) dir[c] = gauss(rng);
            if (dir.norm() == 0.0) continue;
            const Eigen::RowVectorXd p2 = loc.row(0) + pair_distance * dir.normalized();
            if (!in_box(p2)) continue;
            loc.row(1) = p2;
            placed = 2;
        }
        for (int tries = 0; placed < k && tries < kPointAttempts; ++tries) {
            const Eigen::RowVectorXd p = draw_point();
            bool ok = true;
            for (int j = 0; j < placed && ok; ++j) ok = (loc.row(j) - p).norm() >= delta;
            if (ok) loc.row(placed++) = p;
        }
        if (placed < k) continue;
        if (k >= 2) {
            const double sep = min_separation(loc);
            if (sep < delta || sep > 2.0 * delta) continue;
        }

        std::vector<int> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        MatrixXd shuffled(k, d);
        for (int j = 0; j < k; ++j) shuffled.row(j) = loc.row(order[j]);

        VectorXcd w(k);
        for (int j = 0; j < k; ++j) {
            const double mag = std::min(magnitude(rng), law.magnitude_clip);
            w[j] = law.random_phase ? std::polar(mag, phase(rng)) : Complex(mag, 0.0);
        }
        return SourceSet(std::move(shuffled), std::move(w));
    }
    throw InfeasibleSeparationError("random_instance: could not place " + std::to_string(k) +
                                    " sources with separation " + std::to_string(delta) +
                                    " after " + std::to_string(max_retries) + " attempts");
}

}  // namespace superres
