#include "superres/kernels.hpp"

#include <cmath>

namespace superres::kernels::scalar {

void weighted_phase_sum(const PhaseSumArgs& a, const std::complex<double>* weights,
                        std::complex<double>* out) {
    for (std::size_t i = 0; i < a.n; ++i) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < a.k; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < a.d; ++c)
                dot += a.centers[c * a.k + j] * a.points[c * a.n + i];
            const double phase = a.phase_scale * dot;
            const double cs = std::cos(phase);
            const double sn = std::sin(phase);
            re += weights[j].real() * cs - weights[j].imag() * sn;
            im += weights[j].real() * sn + weights[j].imag() * cs;
        }
        out[i] = {re, im};
    }
}

void mean_phase(const PhaseSumArgs& a, std::complex<double>* out) {
    const double inv = a.k == 0 ? 0.0 : 1.0 / static_cast<double>(a.k);
    for (std::size_t i = 0; i < a.n; ++i) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < a.k; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < a.d; ++c)
                dot += a.centers[c * a.k + j] * a.points[c * a.n + i];
            const double phase = a.phase_scale * dot;
            re += std::cos(phase);
            im += std::sin(phase);
        }
        out[i] = {re * inv, im * inv};
    }
}

void sincos(const double* x, std::size_t n, double* sin_out, double* cos_out) {
    for (std::size_t i = 0; i < n; ++i) {
        sin_out[i] = std::sin(x[i]);
        cos_out[i] = std::cos(x[i]);
    }
}

}  // namespace superres::kernels::scalar
