#include "superres/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "superres/types.hpp"

namespace superres::kernels {

#ifndef SUPERRES_HAVE_AVX2
// Stubs so the avx2:: symbols exist on builds without the variant; never
// reached through dispatch because isa_available(avx2) is false.
namespace avx2 {
void weighted_phase_sum(const PhaseSumArgs&, const std::complex<double>*, std::complex<double>*) {
    throw KernelError("AVX2 kernels not compiled in");
}
void mean_phase(const PhaseSumArgs&, std::complex<double>*) {
    throw KernelError("AVX2 kernels not compiled in");
}
void sincos(const double*, std::size_t, double*, double*) {
    throw KernelError("AVX2 kernels not compiled in");
}
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SUPERRES_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() noexcept {
    const bool avx2 = cpu_has_avx2();
    if (const char* env = std::getenv("SUPERRES_KERNEL_ISA")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2" && avx2) return Isa::avx2;
    }
    return avx2 ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) noexcept {
    return isa == Isa::scalar || cpu_has_avx2();
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
    if (!isa_available(isa))
        throw DomainError("kernel ISA '" + std::string(isa_name(isa)) + "' is not available");
    current().store(isa, std::memory_order_relaxed);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active_isa()) { force_isa(isa); }
ScopedIsa::~ScopedIsa() { current().store(previous_, std::memory_order_relaxed); }

void weighted_phase_sum(const PhaseSumArgs& args, const std::complex<double>* weights,
                        std::complex<double>* out) {
    if (active_isa() == Isa::avx2) return avx2::weighted_phase_sum(args, weights, out);
    scalar::weighted_phase_sum(args, weights, out);
}

void mean_phase(const PhaseSumArgs& args, std::complex<double>* out) {
    if (active_isa() == Isa::avx2) return avx2::mean_phase(args, out);
    scalar::mean_phase(args, out);
}

void sincos(const double* x, std::size_t n, double* sin_out, double* cos_out) {
    if (active_isa() == Isa::avx2) return avx2::sincos(x, n, sin_out, cos_out);
    scalar::sincos(x, n, sin_out, cos_out);
}

}  // namespace superres::kernels
