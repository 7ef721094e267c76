#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "superres/linalg.hpp"
#include "superres/sampling.hpp"
#include "support/oracles.hpp"

using namespace superres;

TEST(ChooseCutoff, ClosedFormValues) {
    EXPECT_NEAR(choose_cutoff(1, 3, 0.1, 0.25), std::sqrt(2 * std::log(9.0)) / (0.1 * kPi), 1e-12);
    EXPECT_NEAR(choose_cutoff(1, 3, 0.1, 0.25), 6.674, 2e-3);  // 6.6727 exactly
    EXPECT_NEAR(choose_cutoff(2, 8, 0.05, 0.25), 16.76, 5e-3);
    // d = 1 ignores k
    EXPECT_EQ(choose_cutoff(1, 2, 0.1, 0.25), choose_cutoff(1, 50, 0.1, 0.25));
}

TEST(ChooseCutoff, DecreasesWithSeparation) {
    double prev = choose_cutoff(3, 4, 1e-3, 0.25);
    for (double delta : {1e-2, 1e-1, 1.0, 10.0, 1e6}) {
        const double R = choose_cutoff(3, 4, delta, 0.25);
        EXPECT_LT(R, prev);
        EXPECT_GT(R, 0.0);
        prev = R;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(ChooseCutoff, DomainErrors) {
    EXPECT_THROW(choose_cutoff(2, 3, 0.0, 0.25), DomainError);
    EXPECT_THROW(choose_cutoff(2, 3, -1.0, 0.25), DomainError);
    EXPECT_THROW(choose_cutoff(2, 3, 0.1, 0.5), DomainError);
    EXPECT_THROW(choose_cutoff(2, 3, 0.1, 0.0), DomainError);
}

TEST(ChooseSampleCount, ClosedFormValues) {
    const double first = 32.0 * std::sqrt(8.0 * std::log(80.0));
    EXPECT_EQ(choose_sample_count(8, 0.25, 0.1, 4), static_cast<int>(std::ceil(first)));
    EXPECT_EQ(choose_sample_count(8, 0.25, 0.1, 4), 190);
    EXPECT_EQ(choose_sample_count(1, 0.49, 0.49, 64), 64);
    EXPECT_THROW(choose_sample_count(2, 0.25, 0.6, 2), DomainError);
}

TEST(ChooseSampleCount, MonotoneInConfidence) {
    int prev = 0;
    for (double ds : {0.45, 0.3, 0.1, 0.01, 1e-4}) {
        const int m = choose_sample_count(5, 0.2, ds, 3);
        EXPECT_GE(m, prev);
        prev = m;
    }
}

TEST(DrawPlan, LayoutAndInvariants) {
    const SamplingPlan p = draw_plan(2, 8, 200.0, 30, 2, 42);
    EXPECT_EQ(p.m_prime(), 33);
    EXPECT_NEAR(p.v.norm(), 1.0, 1e-15);
    const PointMatrix S = p.augmented();
    ASSERT_EQ(S.rows(), 33);
    EXPECT_EQ(S.topRows(30), p.gaussian_samples);
    EXPECT_EQ(S.row(30), Eigen::RowVector2d(1.0, 0.0));
    EXPECT_EQ(S.row(31), Eigen::RowVector2d(0.0, 1.0));
    EXPECT_EQ(S.row(32), Eigen::RowVector2d(0.0, 0.0));
    const PointMatrix V = p.projections();
    ASSERT_EQ(V.rows(), 2);
    EXPECT_EQ(V.row(1), 2.0 * V.row(0));

    const SamplingPlan p3 = draw_plan(2, 8, 200.0, 30, 3, 42);
    EXPECT_EQ(p3.projections().row(2).norm(), 0.0);
    EXPECT_EQ(p3.gaussian_samples, p.gaussian_samples);
    EXPECT_EQ(p3.v, p.v);
}

TEST(DrawPlan, DeterministicInSeed) {
    const SamplingPlan a = draw_plan(3, 4, 5.0, 20, 2, 7);
    const SamplingPlan b = draw_plan(3, 4, 5.0, 20, 2, 7);
    const SamplingPlan c = draw_plan(3, 4, 5.0, 20, 2, 8);
    EXPECT_EQ(a.gaussian_samples, b.gaussian_samples);
    EXPECT_EQ(a.v, b.v);
    EXPECT_NE(a.gaussian_samples, c.gaussian_samples);
}

TEST(DrawPlan, ZeroCutoffGivesZeroSamples) {
    const SamplingPlan p = draw_plan(3, 2, 0.0, 10, 2, 1);
    EXPECT_EQ(p.gaussian_samples.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DrawPlan, EmpiricalVariance) {
    const double R = 3.5;
    const SamplingPlan p = draw_plan(3, 2, R, 10000, 2, 5);
    for (int c = 0; c < 3; ++c) {
        const auto col = p.gaussian_samples.col(c);
        const double mean = col.mean();
        const double var = (col.array() - mean).square().sum() / (col.size() - 1);
        EXPECT_NEAR(var, R * R, 0.1 * R * R);
    }
}

TEST(DrawPlan, ProjectionIsRoughlyUniformOnSphere) {
    // mean of v over many seeds approaches 0; E[v_c^2] = 1/d
    const int d = 3, n = 4000;
    VectorXd mean = VectorXd::Zero(d), sq = VectorXd::Zero(d);
    for (int s = 0; s < n; ++s) {
        const VectorXd v = draw_plan(d, 1, 1.0, d, 2, s).v;
        mean += v;
        sq += v.cwiseAbs2();
    }
    mean /= n;
    sq /= n;
    for (int c = 0; c < d; ++c) {
        EXPECT_LT(std::abs(mean[c]), 0.05);
        EXPECT_NEAR(sq[c], 1.0 / d, 0.03);
    }
}

TEST(DrawPlan, DomainErrors) {
    EXPECT_THROW(draw_plan(4, 2, 1.0, 3, 2, 1), DomainError);
    EXPECT_THROW(draw_plan(2, 2, 1.0, 3, 4, 1), DomainError);
    EXPECT_THROW(draw_plan(2, 2, -1.0, 3, 2, 1), DomainError);
}

TEST(DrawPlan, RedrawKeepsSamples) {
    const SamplingPlan a = draw_plan(3, 4, 5.0, 20, 2, 7);
    const SamplingPlan b = redraw_projection(a, 99);
    EXPECT_EQ(a.gaussian_samples, b.gaussian_samples);
    EXPECT_NE(a.v, b.v);
    EXPECT_NEAR(b.v.norm(), 1.0, 1e-15);
}

TEST(BuildTensor, RankOneForSingleSource) {
    MatrixXd mu(1, 2);
    mu << 0.3, -0.7;
    const auto src = std::make_shared<const SourceSet>(mu, VectorXcd::Ones(1));
    PointSourceOracle f(src);
    const SamplingPlan p = draw_plan(2, 1, 4.0, 6, 2, 3);
    const ComplexTensor3 T = build_tensor(f, p).tensor;
    const PointMatrix S = p.augmented(), V = p.projections();
    double worst = 0.0;
    for (int n3 = 0; n3 < 2; ++n3)
        for (int n2 = 0; n2 < 9; ++n2)
            for (int n1 = 0; n1 < 9; ++n1) {
                const Eigen::VectorXd s = (S.row(n1) + S.row(n2) + V.row(n3)).transpose();
                const Complex want = std::exp(Complex(0.0, kPi * mu.row(0).dot(s.transpose())));
                worst = std::max(worst, std::abs(T(n1, n2, n3) - want));
            }
    EXPECT_LE(worst, 1e-12);
}

TEST(BuildTensor, EqualsFactorProductOfTruth) {
    Rng rng(13);
    WeightLaw law;
    law.random_phase = true;
    const auto src = std::make_shared<const SourceSet>(random_instance(2, 5, 0.1, rng, law));
    PointSourceOracle f(src);
    for (int slices : {2, 3}) {
        const SamplingPlan p = draw_plan(2, 5, 6.0, 12, slices, 17);
        const ComplexTensor3 T = build_tensor(f, p).tensor;
        const MatrixXcd VS = oracle::factor(src->locations(), p.augmented());
        const MatrixXcd V2 = oracle::factor(src->locations(), p.projections());
        const MatrixXcd C = V2 * src->weights().asDiagonal();
        const ComplexTensor3 want = factor_product(VS, VS, C);
        EXPECT_LE(oracle::max_abs_diff(T, want), 1e-12);

        // F(I, I, a) = V_S' Diag((V_2^T a) o w) V_S'^T
        const VectorXcd a = VectorXcd::Random(slices);
        const MatrixXcd lhs = contract_mode3(T, a);
        const VectorXcd diag = (V2.transpose() * a).cwiseProduct(src->weights());
        const MatrixXcd rhs = VS * diag.asDiagonal() * VS.transpose();
        EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(BuildTensor, DistinctPointCountAndSymmetry) {
    Rng rng(1);
    const auto src = std::make_shared<const SourceSet>(random_instance(2, 8, 0.05, rng));
    PointSourceOracle f(src, 0.1, NoiseMode::uniform_disk, 5);
    const SamplingPlan p = draw_plan(2, 8, 200.0, 30, 2, 11);
    const MeasurementTensor mt = build_tensor(f, p);
    // cells (n1, n2) and (n2, n1) share a frequency: 33 * 34 / 2 per slice
    EXPECT_EQ(mt.distinct_points, 2u * 33 * 34 / 2);
    EXPECT_EQ(f.distinct_queries(), mt.distinct_points);
    EXPECT_EQ(mt.tensor.size(), 2178);
    for (int n3 = 0; n3 < 2; ++n3)
        for (int a = 0; a < 33; ++a)
            for (int b = 0; b < 33; ++b) EXPECT_EQ(mt.tensor(a, b, n3), mt.tensor(b, a, n3));
}

TEST(BuildTensor, DeterministicAndDimensionChecked) {
    Rng r1(9), r2(9);
    const auto s1 = std::make_shared<const SourceSet>(random_instance(3, 3, 0.1, r1));
    const auto s2 = std::make_shared<const SourceSet>(random_instance(3, 3, 0.1, r2));
    PointSourceOracle f1(s1, 0.05, NoiseMode::uniform_disk, 2);
    PointSourceOracle f2(s2, 0.05, NoiseMode::uniform_disk, 2);
    const SamplingPlan p = draw_plan(3, 3, 4.0, 8, 2, 6);
    const ComplexTensor3 a = build_tensor(f1, p).tensor, b = build_tensor(f2, p).tensor;
    EXPECT_TRUE(std::equal(a.data(), a.data() + a.size(), b.data()));
    EXPECT_THROW(build_tensor(f1, draw_plan(2, 3, 4.0, 8, 2, 6)), DomainError);
}

TEST(ReportCutoff, ZeroCutoffOnlyBasisAndProjection) {
    const SamplingPlan p = draw_plan(3, 2, 0.0, 4, 2, 21);
    const CutoffReport r = report_cutoff(p);
    // each coordinate is (0, 1 or 2 basis hits) + (1 or 2) * v_c
    double want = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double hits : {0.0, 1.0, 2.0})
            for (double t : {1.0, 2.0}) want = std::max(want, std::abs(hits + t * p.v[c]));
    EXPECT_NEAR(r.per_coordinate, want, 1e-15);
    EXPECT_LE(r.per_coordinate, 4.0);
    EXPECT_EQ(r.predicted, 0.0);
}

TEST(ReportCutoff, FigureOnePlanWithinPredictedOrder) {
    const SamplingPlan p = draw_plan(2, 8, 200.0, 30, 2, 1);
    const CutoffReport r = report_cutoff(p);
    const PointMatrix pts = tensor_frequencies(p);
    EXPECT_EQ(r.per_coordinate, pts.cwiseAbs().maxCoeff());
    EXPECT_LE(r.per_coordinate, 10.0 * 200.0);
    EXPECT_NEAR(r.predicted, 200.0 * std::sqrt(std::log(60.0)), 1e-9);
}

TEST(CharacteristicMatrix, MatchesOracle) {
    Rng rng(4);
    const SourceSet s = random_instance(3, 6, 0.1, rng);
    const SamplingPlan p = draw_plan(3, 6, 10.0, 25, 2, 4);
    const MatrixXcd got = characteristic_matrix(s.locations(), p.augmented());
    const MatrixXcd want = oracle::factor(s.locations(), p.augmented());
    EXPECT_LE((got - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GramMatrix, Examples) {
    MatrixXd one(1, 2);
    one << 0.2, 0.2;
    EXPECT_EQ(expected_gram_matrix(SourceSet(one, VectorXcd::Ones(1)), 3.0), MatrixXd::Ones(1, 1));

    const double delta = 0.05, eps_x = 0.25;
    const int k = 2;
    MatrixXd pair(2, 2);
    pair << 0.0, 0.0, delta, 0.0;
    const double R = choose_cutoff(2, k, delta, eps_x);
    const MatrixXd Y = expected_gram_matrix(SourceSet(pair, VectorXcd::Ones(2)), R);
    EXPECT_LE(std::abs(Y(0, 1)), eps_x / k * (1 + 1e-12));
    EXPECT_EQ(Y(0, 0), 1.0);
}

TEST(GramMatrix, SpectrumAndGershgorin) {
    Rng rng(3);
    const double eps_x = 0.25, delta = 0.1;
    for (int trial = 0; trial < 10; ++trial) {
        const SourceSet s = random_instance(2, 5, delta, rng);
        const MatrixXd Y = expected_gram_matrix(s, choose_cutoff(2, 5, delta, eps_x));
        const Eigen::SelfAdjointEigenSolver<MatrixXd> es(Y);
        EXPECT_GE(es.eigenvalues().minCoeff(), 1 - eps_x - 1e-12);
        EXPECT_LE(es.eigenvalues().maxCoeff(), 1 + eps_x + 1e-12);
        const MatrixXcd Yc = Y.cast<Complex>();
        EXPECT_TRUE(within_gershgorin(Yc, es.eigenvalues().cast<Complex>(), 1e-12));
    }
}

TEST(GramMatrix, EmpiricalConcentration) {
    // (1/m) V_S^H V_S concentrates around the identity; cond(V_S) follows
    const int k = 4, d = 3;
    const double eps_x = 0.25, delta_s = 0.1, delta = 0.1;
    const int m = choose_sample_count(k, eps_x, delta_s, d);
    const double R = choose_cutoff(d, k, delta, eps_x);
    Rng rng(8);
    int good = 0;
    const int trials = 30;
    for (int t = 0; t < trials; ++t) {
        const SourceSet s = random_instance(d, k, delta, rng);
        const SamplingPlan p = draw_plan(d, k, R, m, 2, 100 + t);
        const MatrixXcd VS = characteristic_matrix(s.locations(), p.gaussian_samples);
        const MatrixXcd G = VS.adjoint() * VS / double(m);
        const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(G);
        const bool ok = es.eigenvalues().minCoeff() >= 1 - 2 * eps_x &&
                        es.eigenvalues().maxCoeff() <= 1 + 2 * eps_x;
        if (ok) {
            ++good;
            EXPECT_LE(cond2(VS), std::sqrt((1 + 2 * eps_x) / (1 - 2 * eps_x)) + 1e-12);
        }
    }
    EXPECT_GE(good, static_cast<int>(std::ceil((1 - delta_s) * trials)));
}
