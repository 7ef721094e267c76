// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; callers reach it through the runtime dispatcher.

#include "superres/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <vector>

namespace superres::kernels::avx2 {
namespace {

// pi/2 split into three parts; the first has 24 significant bits so that
// q * kPio2Hi is exact for |q| < 2^29.
constexpr double kTwoOverPi = 0.636619772367581343075535053490057448;
constexpr double kPio2Hi = 1.57079625129699707031e+00;
constexpr double kPio2Mid = 7.54978941586159635335e-08;
constexpr double kPio2Lo = 5.39030285815811905290e-15;

// Minimax coefficients on [-pi/4, pi/4] (Cephes).
constexpr std::array<double, 6> kSinCoef = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
    -1.98412698295895385996e-4, 8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr std::array<double, 6> kCosCoef = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
    2.48015872888517045348e-5,   -1.38888888888730564116e-3, 4.16666666666665929218e-2};

inline __m256d horner(__m256d z, const std::array<double, 6>& c) {
    __m256d p = _mm256_set1_pd(c[0]);
    for (std::size_t i = 1; i < c.size(); ++i)
        p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[i]));
    return p;
}

inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
    const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Hi), x);
    r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Mid), r);
    r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2Lo), r);

    const __m256d z = _mm256_mul_pd(r, r);
    const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), horner(z, kSinCoef), r);
    const __m256d cos_r = _mm256_fmadd_pd(
        _mm256_mul_pd(z, z), horner(z, kCosCoef),
        _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

    // quadrant = q mod 4, computed exactly in floating point
    const __m256d quarter =
        _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25)));
    const __m256d quad = _mm256_fnmadd_pd(quarter, _mm256_set1_pd(4.0), q);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d three = _mm256_set1_pd(3.0);
    const __m256d is1 = _mm256_cmp_pd(quad, one, _CMP_EQ_OQ);
    const __m256d is2 = _mm256_cmp_pd(quad, two, _CMP_EQ_OQ);
    const __m256d is3 = _mm256_cmp_pd(quad, three, _CMP_EQ_OQ);
    const __m256d swap = _mm256_or_pd(is1, is3);
    const __m256d sin_neg = _mm256_or_pd(is2, is3);
    const __m256d cos_neg = _mm256_or_pd(is1, is2);
    const __m256d sign = _mm256_set1_pd(-0.0);

    const __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap);
    const __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap);
    s_out = _mm256_xor_pd(s, _mm256_and_pd(sin_neg, sign));
    c_out = _mm256_xor_pd(c, _mm256_and_pd(cos_neg, sign));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Phases for points [i, i+4) given broadcast center coordinates.
inline __m256d block_phase_over_points(const PhaseSumArgs& a, const double* pts,
                                       std::size_t stride, std::size_t j) {
    __m256d dot = _mm256_setzero_pd();
    for (std::size_t c = 0; c < a.d; ++c)
        dot = _mm256_fmadd_pd(_mm256_set1_pd(a.centers[c * a.k + j]),
                              _mm256_loadu_pd(pts + c * stride), dot);
    return _mm256_mul_pd(dot, _mm256_set1_pd(a.phase_scale));
}

}  // namespace

void sincos(const double* x, std::size_t n, double* sin_out, double* cos_out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s, c;
        sincos_pd(_mm256_loadu_pd(x + i), s, c);
        _mm256_storeu_pd(sin_out + i, s);
        _mm256_storeu_pd(cos_out + i, c);
    }
    if (i < n) {
        alignas(32) double buf[4] = {0, 0, 0, 0};
        alignas(32) double sb[4], cb[4];
        std::copy(x + i, x + n, buf);
        __m256d s, c;
        sincos_pd(_mm256_load_pd(buf), s, c);
        _mm256_store_pd(sb, s);
        _mm256_store_pd(cb, c);
        std::copy(sb, sb + (n - i), sin_out + i);
        std::copy(cb, cb + (n - i), cos_out + i);
    }
}

void weighted_phase_sum(const PhaseSumArgs& a, const std::complex<double>* weights,
                        std::complex<double>* out) {
    std::vector<double> tail;
    for (std::size_t i = 0; i < a.n; i += 4) {
        const double* pts = a.points + i;
        std::size_t stride = a.n;
        const std::size_t lanes = std::min<std::size_t>(4, a.n - i);
        if (lanes < 4) {
            // zero-padded copy of the remaining points
            tail.assign(4 * a.d, 0.0);
            for (std::size_t c = 0; c < a.d; ++c)
                for (std::size_t l = 0; l < lanes; ++l)
                    tail[c * 4 + l] = a.points[c * a.n + i + l];
            pts = tail.data();
            stride = 4;
        }
        __m256d re = _mm256_setzero_pd();
        __m256d im = _mm256_setzero_pd();
        for (std::size_t j = 0; j < a.k; ++j) {
            __m256d sn, cs;
            sincos_pd(block_phase_over_points(a, pts, stride, j), sn, cs);
            const __m256d wr = _mm256_set1_pd(weights[j].real());
            const __m256d wi = _mm256_set1_pd(weights[j].imag());
            re = _mm256_fmadd_pd(wr, cs, re);
            re = _mm256_fnmadd_pd(wi, sn, re);
            im = _mm256_fmadd_pd(wr, sn, im);
            im = _mm256_fmadd_pd(wi, cs, im);
        }
        alignas(32) double rb[4], ib[4];
        _mm256_store_pd(rb, re);
        _mm256_store_pd(ib, im);
        for (std::size_t l = 0; l < lanes; ++l)
            out[i + l] = {rb[l], ib[l]};
    }
}

void mean_phase(const PhaseSumArgs& a, std::complex<double>* out) {
    const double inv = a.k == 0 ? 0.0 : 1.0 / static_cast<double>(a.k);
    const std::size_t full = a.k / 4 * 4;
    const std::size_t rest = a.k - full;
    const __m256i lane_idx = _mm256_set_epi64x(3, 2, 1, 0);
    const __m256d tail_mask = _mm256_castsi256_pd(
        _mm256_cmpgt_epi64(_mm256_set1_epi64x(static_cast<long long>(rest)), lane_idx));

    for (std::size_t i = 0; i < a.n; ++i) {
        __m256d re0 = _mm256_setzero_pd(), im0 = _mm256_setzero_pd();
        __m256d re1 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
        const __m256d scale = _mm256_set1_pd(a.phase_scale);

        auto phase_at = [&](std::size_t j, auto load) {
            __m256d dot = _mm256_setzero_pd();
            for (std::size_t c = 0; c < a.d; ++c)
                dot = _mm256_fmadd_pd(load(a.centers + c * a.k + j),
                                      _mm256_set1_pd(a.points[c * a.n + i]), dot);
            return _mm256_mul_pd(dot, scale);
        };
        const auto unaligned = [](const double* p) { return _mm256_loadu_pd(p); };

        std::size_t j = 0;
        for (; j + 8 <= full; j += 8) {
            __m256d s0, c0, s1, c1;
            sincos_pd(phase_at(j, unaligned), s0, c0);
            sincos_pd(phase_at(j + 4, unaligned), s1, c1);
            re0 = _mm256_add_pd(re0, c0);
            im0 = _mm256_add_pd(im0, s0);
            re1 = _mm256_add_pd(re1, c1);
            im1 = _mm256_add_pd(im1, s1);
        }
        for (; j < full; j += 4) {
            __m256d s0, c0;
            sincos_pd(phase_at(j, unaligned), s0, c0);
            re0 = _mm256_add_pd(re0, c0);
            im0 = _mm256_add_pd(im0, s0);
        }
        if (rest > 0) {
            const __m256i m = _mm256_castpd_si256(tail_mask);
            const auto masked = [m](const double* p) { return _mm256_maskload_pd(p, m); };
            __m256d s0, c0;
            sincos_pd(phase_at(full, masked), s0, c0);
            re1 = _mm256_add_pd(re1, _mm256_and_pd(c0, tail_mask));
            im1 = _mm256_add_pd(im1, _mm256_and_pd(s0, tail_mask));
        }
        out[i] = {hsum(_mm256_add_pd(re0, re1)) * inv, hsum(_mm256_add_pd(im0, im1)) * inv};
    }
}

}  // namespace superres::kernels::avx2
