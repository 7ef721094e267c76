#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace superres {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;
using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;

/// Points are stored one per row; each coordinate is a contiguous column
/// (column-major), which is the layout the vector kernels stream over.
using PointMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range parameter or shape mismatch.
class DomainError : public Error {
public:
    using Error::Error;
};

class InfeasibleSeparationError : public Error {
public:
    using Error::Error;
};

/// sigma_k of the whitening slice fell below the rank tolerance.
class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

class SingularPencilError : public Error {
public:
    using Error::Error;
};

/// Last-row entry of a recovered factor column is (numerically) zero.
class VanishingNormalizationError : public Error {
public:
    using Error::Error;
};

class KernelError : public Error {
public:
    using Error::Error;
};

/// Wraps a failure inside the recovery pipeline with the stage that raised it.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Stateless 64-bit mixer; used to derive substream seeds and the
/// per-frequency noise draws.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
    return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

}  // namespace superres
