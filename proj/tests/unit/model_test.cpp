#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <thread>

#include "superres/kernels.hpp"
#include "superres/model.hpp"
#include "support/oracles.hpp"

using namespace superres;

namespace {

SourceSet make_source(MatrixXd mu, VectorXcd w) { return SourceSet(std::move(mu), std::move(w)); }

PointMatrix random_points(Rng& rng, int n, int d, double scale) {
    std::normal_distribution<double> g(0.0, scale);
    PointMatrix p(n, d);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) p(i, c) = g(rng);
    return p;
}

}  // namespace

TEST(MinSeparation, ThreeFourFiveTriangle) {
    MatrixXd mu(2, 2);
    mu << 0.0, 0.0, 0.3, 0.4;
    EXPECT_NEAR(min_separation(mu), 0.5, 1e-15);
}

TEST(MinSeparation, SingleSourceIsInfinite) {
    MatrixXd mu(1, 3);
    mu << 0.1, 0.2, 0.3;
    EXPECT_EQ(min_separation(mu), std::numeric_limits<double>::infinity());
}

TEST(MinSeparation, MatchesBruteForceAndIsPermutationInvariant) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const SourceSet s = random_instance(1 + trial % 4, 8, 0.05, rng);
        MatrixXd mu = s.locations();
        EXPECT_DOUBLE_EQ(min_separation(mu), oracle::min_separation(mu));
        mu.row(0).swap(mu.row(7));
        mu.row(2).swap(mu.row(5));
        EXPECT_DOUBLE_EQ(min_separation(mu), oracle::min_separation(mu));
        EXPECT_DOUBLE_EQ(min_separation(mu), min_separation(s));
    }
}

TEST(SourceSet, ValidatesNormalization) {
    MatrixXd mu(2, 1);
    mu << 0.1, 0.2;
    VectorXcd w(2);
    w << 1.0, 0.5;
    EXPECT_NO_THROW(make_source(mu, w));

    MatrixXd out_of_box = mu;
    out_of_box(1, 0) = 1.5;
    EXPECT_THROW(make_source(out_of_box, w), DomainError);

    VectorXcd zero_weight = w;
    zero_weight[0] = 0.0;
    EXPECT_THROW(make_source(mu, zero_weight), DomainError);

    VectorXcd big_weight = w;
    big_weight[0] = Complex(0.9, 0.9);
    EXPECT_THROW(make_source(mu, big_weight), DomainError);

    MatrixXd duplicate = mu;
    duplicate(1, 0) = 0.1;
    EXPECT_THROW(make_source(duplicate, w), DomainError);

    EXPECT_THROW(make_source(mu, VectorXcd::Ones(3)), DomainError);
}

TEST(SourceSet, WeightExtremes) {
    MatrixXd mu(3, 1);
    mu << -0.5, 0.0, 0.5;
    VectorXcd w(3);
    w << 0.2, Complex(0.0, -0.7), 0.4;
    const SourceSet s(mu, w);
    EXPECT_DOUBLE_EQ(s.w_min(), 0.2);
    EXPECT_DOUBLE_EQ(s.w_max(), 0.7);
}

TEST(Evaluate, AtZeroIsWeightSum) {
    Rng rng(3);
    const auto s = std::make_shared<const SourceSet>(random_instance(3, 5, 0.1, rng));
    PointSourceOracle f(s);
    const double zero[3] = {0.0, 0.0, 0.0};
    const Complex v = f.evaluate(zero);
    EXPECT_NEAR(std::abs(v - s->weights().sum()), 0.0, 1e-15);
}

TEST(Evaluate, UnitPhase) {
    MatrixXd mu(1, 2);
    mu << 1.0, 0.0;
    const auto s = std::make_shared<const SourceSet>(mu, VectorXcd::Ones(1));
    PointSourceOracle f(s);
    const double at[2] = {1.0, 0.0};
    const Complex v = f.evaluate(at);
    EXPECT_NEAR(v.real(), -1.0, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(Evaluate, MatchesDirectSummationForEveryKernel) {
    Rng rng(5);
    WeightLaw law;
    law.random_phase = true;
    const SourceSet s = random_instance(3, 3, 0.2, rng, law);
    const PointMatrix pts = random_points(rng, 20, 3, 30.0);
    for (auto isa : {kernels::Isa::scalar, kernels::Isa::avx2}) {
        if (!kernels::isa_available(isa)) continue;
        kernels::ScopedIsa scope(isa);
        const VectorXcd got = evaluate_clean(s, pts);
        for (int i = 0; i < pts.rows(); ++i) {
            const Complex want =
                oracle::direct_sum(s.locations(), s.weights(), pts.row(i).transpose());
            EXPECT_NEAR(std::abs(got[i] - want), 0.0, 1e-12) << kernels::isa_name(isa);
        }
    }
}

TEST(Evaluate, ConjugateSymmetryForRealWeights) {
    Rng rng(8);
    const auto s = std::make_shared<const SourceSet>(random_instance(2, 6, 0.1, rng));
    PointSourceOracle f(s);
    const PointMatrix pts = random_points(rng, 50, 2, 10.0);
    const VectorXcd plus = f.evaluate_batch(pts);
    const VectorXcd minus = f.evaluate_batch(-pts);
    for (int i = 0; i < pts.rows(); ++i)
        EXPECT_NEAR(std::abs(minus[i] - std::conj(plus[i])), 0.0, 1e-13);
}

TEST(Noise, BoundedAndMagnitudeBound) {
    Rng rng(21);
    const auto s = std::make_shared<const SourceSet>(random_instance(2, 4, 0.1, rng));
    const double eps = 0.1;
    PointSourceOracle noisy(s, eps, NoiseMode::uniform_disk, 77);
    const PointMatrix pts = random_points(rng, 2000, 2, 20.0);
    const VectorXcd got = noisy.evaluate_batch(pts);
    const VectorXcd clean = evaluate_clean(*s, pts);
    const double cap = s->weights().cwiseAbs().sum() + eps;
    double mean_sq = 0.0;
    for (int i = 0; i < pts.rows(); ++i) {
        const double z = std::abs(got[i] - clean[i]);
        EXPECT_LE(z, eps * (1 + 1e-12));
        EXPECT_LE(std::abs(got[i]), cap + 1e-12);
        mean_sq += z * z;
    }
    // uniform on the disk: E|z|^2 = eps^2 / 2
    mean_sq /= pts.rows();
    EXPECT_NEAR(mean_sq, eps * eps / 2, 0.05 * eps * eps);
}

TEST(Noise, NoneModeIsExact) {
    Rng rng(2);
    const auto s = std::make_shared<const SourceSet>(random_instance(2, 4, 0.1, rng));
    PointSourceOracle f(s);
    const PointMatrix pts = random_points(rng, 30, 2, 5.0);
    const VectorXcd a = f.evaluate_batch(pts);
    const VectorXcd b = evaluate_clean(*s, pts);
    EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Noise, MemoizedPerFrequencyAndSeeded) {
    Rng rng(4);
    const auto s = std::make_shared<const SourceSet>(random_instance(2, 3, 0.1, rng));
    PointSourceOracle f(s, 0.5, NoiseMode::uniform_disk, 9);
    PointSourceOracle same_seed(s, 0.5, NoiseMode::uniform_disk, 9);
    PointSourceOracle other_seed(s, 0.5, NoiseMode::uniform_disk, 10);

    const double a[2] = {1.25, -3.5};
    const Complex first = f.evaluate(a);
    EXPECT_EQ(f.evaluate(a), first);
    EXPECT_EQ(same_seed.evaluate(a), first);
    EXPECT_NE(other_seed.evaluate(a), first);

    // -0.0 and +0.0 are the same frequency
    const double pz[2] = {0.0, 2.0};
    const double nz[2] = {-0.0, 2.0};
    EXPECT_EQ(f.evaluate(pz), f.evaluate(nz));
    EXPECT_EQ(f.distinct_queries(), 2u);

    // evaluation order does not matter
    PointMatrix batch(3, 2);
    batch << 0.5, 0.5, 1.25, -3.5, 7.0, 1.0;
    const VectorXcd forward = same_seed.evaluate_batch(batch);
    PointSourceOracle fresh(s, 0.5, NoiseMode::uniform_disk, 9);
    const VectorXcd reversed = fresh.evaluate_batch(batch.colwise().reverse());
    for (int i = 0; i < 3; ++i) EXPECT_EQ(forward[i], reversed[2 - i]);
}

TEST(Noise, DuplicateRowsInOneBatchShareOneValue) {
    Rng rng(6);
    const auto s = std::make_shared<const SourceSet>(random_instance(1, 2, 0.3, rng));
    PointSourceOracle f(s, 0.2, NoiseMode::uniform_disk, 1);
    PointMatrix batch(4, 1);
    batch << 3.0, 4.0, 3.0, 3.0;
    const VectorXcd v = f.evaluate_batch(batch);
    EXPECT_EQ(v[0], v[2]);
    EXPECT_EQ(v[0], v[3]);
    EXPECT_EQ(f.distinct_queries(), 2u);
}

TEST(Noise, CustomHookIsClipped) {
    MatrixXd mu(1, 1);
    mu << 0.0;
    const auto s = std::make_shared<const SourceSet>(mu, VectorXcd::Ones(1));
    PointSourceOracle f(s, 0.01, NoiseMode::custom, 0,
                        [](std::span<const double> x) { return Complex(10.0 * (1 + x[0]), 0.0); });
    const double at[1] = {0.0};
    EXPECT_NEAR(std::abs(f.evaluate(at) - 1.0), 0.01, 1e-15);
    EXPECT_THROW(PointSourceOracle(s, 0.1, NoiseMode::custom, 0, {}), DomainError);
    EXPECT_THROW(PointSourceOracle(s, -0.1), DomainError);
}

TEST(Noise, ConcurrentEvaluationSeesOneDrawPerFrequency) {
    Rng rng(12);
    const auto s = std::make_shared<const SourceSet>(random_instance(2, 4, 0.1, rng));
    const PointMatrix pts = random_points(rng, 400, 2, 10.0);
    PointSourceOracle serial(s, 0.1, NoiseMode::uniform_disk, 3);
    const VectorXcd want = serial.evaluate_batch(pts);

    PointSourceOracle shared(s, 0.1, NoiseMode::uniform_disk, 3);
    std::vector<VectorXcd> got(4);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t] {
            // overlapping, differently ordered slices of the same point set
            const int start = 50 * t;
            got[t] = shared.evaluate_batch(pts.middleRows(start, 250));
        });
    for (auto& th : pool) th.join();
    for (int t = 0; t < 4; ++t)
        for (int i = 0; i < 250; ++i) EXPECT_EQ(got[t][i], want[50 * t + i]);
    EXPECT_EQ(shared.distinct_queries(), 400u);
}

TEST(RandomInstance, SeparationWithinFactorTwo) {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const SourceSet s = random_instance(4, 8, 0.05, rng);
        const double sep = oracle::min_separation(s.locations());
        EXPECT_GE(sep, 0.05);
        EXPECT_LE(sep, 0.1);
        EXPECT_LE(s.locations().cwiseAbs().maxCoeff(), 1.0);
        for (int j = 0; j < 8; ++j) {
            EXPECT_GE(std::abs(s.weights()[j]), 0.1);
            EXPECT_LE(std::abs(s.weights()[j]), 1.0);
            EXPECT_EQ(s.weights()[j].imag(), 0.0);
        }
    }
}

TEST(RandomInstance, NearlyDiametricPair) {
    Rng rng(2);
    const SourceSet s = random_instance(1, 2, 1.9, rng);
    const double a = s.locations()(0, 0);
    const double b = s.locations()(1, 0);
    EXPECT_GE(std::abs(a - b), 1.9);
    EXPECT_GE(std::min(a, b), -1.0);
    EXPECT_LE(std::min(a, b), -0.9);
    EXPECT_GE(std::max(a, b), 0.9);
}

TEST(RandomInstance, InfeasibleSeparation) {
    Rng rng(3);
    EXPECT_THROW(random_instance(2, 2, 2.0 * 2 + 0.1, rng), InfeasibleSeparationError);
    EXPECT_THROW(random_instance(1, 30, 0.1, rng, {}, 5), InfeasibleSeparationError);
    EXPECT_NO_THROW(random_instance(1, 1, 100.0, rng));
}

TEST(RandomInstance, DeterministicAndPhaseOption) {
    Rng a(99), b(99);
    WeightLaw law;
    law.random_phase = true;
    const SourceSet x = random_instance(3, 5, 0.1, a, law);
    const SourceSet y = random_instance(3, 5, 0.1, b, law);
    EXPECT_EQ(x.locations(), y.locations());
    EXPECT_EQ(x.weights(), y.weights());
    EXPECT_GT(x.weights().imag().cwiseAbs().maxCoeff(), 0.0);
}
