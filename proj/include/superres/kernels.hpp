#pragma once

// Data-parallel inner loops: complex-exponential sums over point sets.
//
// Every kernel has a scalar reference implementation (libm sin/cos) and, on
// x86-64, an AVX2+FMA variant chosen at runtime. The two agree to within a
// few ulp per term; tests/unit/kernels_test.cpp pins the tolerance.

#include <complex>
#include <cstddef>
#include <string_view>

namespace superres::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the variant was compiled in and the CPU supports it.
bool isa_available(Isa isa) noexcept;

/// ISA used by the dispatching entry points. Defaults to the best available,
/// overridable with SUPERRES_KERNEL_ISA=scalar|avx2 or force_isa().
Isa active_isa() noexcept;

/// Throws DomainError if the requested ISA is unavailable.
void force_isa(Isa isa);

/// RAII override of the active ISA (tests, benchmarks).
class ScopedIsa {
public:
    explicit ScopedIsa(Isa isa);
    ~ScopedIsa();
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

private:
    Isa previous_;
};

/// Arguments shared by both exponential-sum kernels. Point arrays are
/// column-major (coordinate c of point i at data[c * rows + i]).
struct PhaseSumArgs {
    const double* points = nullptr;   ///< n x d evaluation frequencies
    std::size_t n = 0;
    std::size_t d = 0;
    const double* centers = nullptr;  ///< k x d
    std::size_t k = 0;
    double phase_scale = 1.0;
};

/// out[i] = sum_j weights[j] * exp(i * phase_scale * <centers_j, points_i>).
/// Vectorized over the evaluation points i.
void weighted_phase_sum(const PhaseSumArgs& args, const std::complex<double>* weights,
                        std::complex<double>* out);

/// out[i] = (1/k) * sum_j exp(i * phase_scale * <centers_j, points_i>).
/// Vectorized over the (typically many) centers j, i.e. an empirical
/// characteristic function with the centers playing the role of samples.
void mean_phase(const PhaseSumArgs& args, std::complex<double>* out);

/// Elementwise sin and cos.
void sincos(const double* x, std::size_t n, double* sin_out, double* cos_out);

// Direct access to a specific variant (equivalence tests, benchmarks).
namespace scalar {
void weighted_phase_sum(const PhaseSumArgs& args, const std::complex<double>* weights,
                        std::complex<double>* out);
void mean_phase(const PhaseSumArgs& args, std::complex<double>* out);
void sincos(const double* x, std::size_t n, double* sin_out, double* cos_out);
}  // namespace scalar

namespace avx2 {
void weighted_phase_sum(const PhaseSumArgs& args, const std::complex<double>* weights,
                        std::complex<double>* out);
void mean_phase(const PhaseSumArgs& args, std::complex<double>* out);
void sincos(const double* x, std::size_t n, double* sin_out, double* cos_out);
}  // namespace avx2

}  // namespace superres::kernels
