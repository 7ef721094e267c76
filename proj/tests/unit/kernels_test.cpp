#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "superres/kernels.hpp"
#include "superres/types.hpp"

using namespace superres;
namespace k = superres::kernels;

namespace {

struct Problem {
    std::vector<double> points, centers;
    std::vector<std::complex<double>> weights;
    std::size_t n, d, kc;
    double scale;

    k::PhaseSumArgs args() const {
        return {points.data(), n, d, centers.data(), kc, scale};
    }
};

Problem make_problem(std::size_t n, std::size_t d, std::size_t kc, double spread,
                     std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Problem p{{}, {}, {}, n, d, kc, kPi};
    p.points.resize(n * d);
    p.centers.resize(kc * d);
    for (auto& x : p.points) x = spread * u(rng);
    for (auto& x : p.centers) x = u(rng);
    for (std::size_t j = 0; j < kc; ++j) p.weights.emplace_back(u(rng), u(rng));
    return p;
}

bool have_avx2() { return k::isa_available(k::Isa::avx2); }

}  // namespace

// Sizes deliberately include tails that are not multiples of the vector width.
class KernelEquivalence : public ::testing::TestWithParam<std::tuple<int, int, int, double>> {};

TEST_P(KernelEquivalence, WeightedPhaseSum) {
    if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
    const auto [n, d, kc, spread] = GetParam();
    const Problem p = make_problem(n, d, kc, spread, 1000 + n * 7 + kc);
    std::vector<std::complex<double>> a(n), b(n);
    k::scalar::weighted_phase_sum(p.args(), p.weights.data(), a.data());
    k::avx2::weighted_phase_sum(p.args(), p.weights.data(), b.data());
    // per-term phase error grows with |phase| ~ pi * d * spread
    const double tol = 4e-16 * kc * (1.0 + kPi * d * spread);
    for (int i = 0; i < n; ++i) EXPECT_LE(std::abs(a[i] - b[i]), tol) << "i=" << i;
}

TEST_P(KernelEquivalence, MeanPhase) {
    if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
    const auto [n, d, kc, spread] = GetParam();
    const Problem p = make_problem(n, d, kc, spread, 2000 + n * 3 + kc);
    std::vector<std::complex<double>> a(n), b(n);
    k::scalar::mean_phase(p.args(), a.data());
    k::avx2::mean_phase(p.args(), b.data());
    const double tol = 4e-16 * (1.0 + kPi * d * spread);
    for (int i = 0; i < n; ++i) EXPECT_LE(std::abs(a[i] - b[i]), tol) << "i=" << i;
}

INSTANTIATE_TEST_SUITE_P(Shapes, KernelEquivalence,
                         ::testing::Values(std::make_tuple(1, 1, 1, 1.0),
                                           std::make_tuple(3, 2, 5, 10.0),
                                           std::make_tuple(4, 4, 8, 100.0),
                                           std::make_tuple(17, 3, 9, 250.0),
                                           std::make_tuple(64, 2, 13, 1.0),
                                           std::make_tuple(7, 4, 1001, 30.0),
                                           std::make_tuple(33, 1, 7, 5000.0)));

TEST(Kernels, SincosMatchesLibmOverWideRange) {
    if (!have_avx2()) GTEST_SKIP() << "AVX2 not available";
    Rng rng(5);
    std::vector<double> x;
    for (double v : {0.0, -0.0, 1e-300, kPi / 4, kPi / 2, kPi, 3 * kPi / 2, -kPi, 1e5})
        x.push_back(v);
    for (double range : {1.0, 10.0, 1e3, 1e5}) {
        std::uniform_real_distribution<double> u(-range, range);
        for (int i = 0; i < 1001; ++i) x.push_back(u(rng));
    }
    std::vector<double> s(x.size()), c(x.size());
    k::avx2::sincos(x.data(), x.size(), s.data(), c.data());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double tol = 2.5e-16 * std::max(1.0, std::abs(x[i]) / 100.0) + 1e-16;
        EXPECT_NEAR(s[i], std::sin(x[i]), tol) << "x=" << x[i];
        EXPECT_NEAR(c[i], std::cos(x[i]), tol) << "x=" << x[i];
    }
}

TEST(Kernels, EmptyInputsAreNoOps) {
    const Problem p = make_problem(0, 2, 3, 1.0, 1);
    k::scalar::weighted_phase_sum(p.args(), p.weights.data(), nullptr);
    if (have_avx2()) k::avx2::weighted_phase_sum(p.args(), p.weights.data(), nullptr);
    SUCCEED();
}

TEST(Kernels, DispatchFollowsForcedIsa) {
    const Problem p = make_problem(9, 2, 5, 50.0, 4);
    std::vector<std::complex<double>> ref(9), got(9);
    k::scalar::weighted_phase_sum(p.args(), p.weights.data(), ref.data());
    {
        k::ScopedIsa scope(k::Isa::scalar);
        EXPECT_EQ(k::active_isa(), k::Isa::scalar);
        k::weighted_phase_sum(p.args(), p.weights.data(), got.data());
        EXPECT_EQ(got, ref);  // bit-identical: same code path
    }
    if (have_avx2()) {
        k::ScopedIsa scope(k::Isa::avx2);
        EXPECT_EQ(k::active_isa(), k::Isa::avx2);
    } else {
        EXPECT_THROW(k::force_isa(k::Isa::avx2), DomainError);
    }
}

TEST(Kernels, ScopedIsaRestoresPrevious) {
    const k::Isa before = k::active_isa();
    {
        k::ScopedIsa scope(k::Isa::scalar);
    }
    EXPECT_EQ(k::active_isa(), before);
    EXPECT_EQ(k::isa_name(k::Isa::scalar), "scalar");
    EXPECT_EQ(k::isa_name(k::Isa::avx2), "avx2");
}
