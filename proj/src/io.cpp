#include "superres/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>

namespace superres::io {

namespace {

template <typename T>
T parse(const std::string& tok, const char* what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw DomainError(std::string("parse error reading ") + what + ": '" + tok + "'");
    return value;
}

template <typename T>
T next(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw DomainError(std::string("unexpected end of input reading ") + what);
    return parse<T>(tok, what);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> b;
    if (!in.read(reinterpret_cast<char*>(b.data()), 8))
        throw DomainError("binary input truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

void check_stream(const std::ostream& out) {
    if (!out) throw Error("write failed");
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 32> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

void write_source_set(std::ostream& out, const SourceSet& source) {
    out << source.dim() << ' ' << source.size() << '\n';
    for (int j = 0; j < source.size(); ++j) {
        out << format_double(source.weights()[j].real()) << ' '
            << format_double(source.weights()[j].imag());
        for (int c = 0; c < source.dim(); ++c)
            out << ' ' << format_double(source.locations()(j, c));
        out << '\n';
    }
    check_stream(out);
}

SourceSet read_source_set(std::istream& in) {
    const int d = next<int>(in, "d");
    const int k = next<int>(in, "k");
    if (d < 1 || k < 1) throw DomainError("source set header needs d >= 1 and k >= 1");
    MatrixXd loc(k, d);
    VectorXcd w(k);
    for (int j = 0; j < k; ++j) {
        const double re = next<double>(in, "weight");
        const double im = next<double>(in, "weight");
        w[j] = {re, im};
        for (int c = 0; c < d; ++c) loc(j, c) = next<double>(in, "location");
    }
    return SourceSet(std::move(loc), std::move(w));
}

void write_plan(std::ostream& out, const SamplingPlan& plan) {
    out << plan.d << ' ' << plan.k << ' ' << plan.m << ' ' << format_double(plan.R) << ' '
        << plan.slice_count << ' ' << plan.seed << '\n';
    for (int i = 0; i < plan.m; ++i) {
        for (int c = 0; c < plan.d; ++c)
            out << (c ? " " : "") << format_double(plan.gaussian_samples(i, c));
        out << '\n';
    }
    for (int c = 0; c < plan.d; ++c) out << (c ? " " : "") << format_double(plan.v[c]);
    out << '\n';
    check_stream(out);
}

SamplingPlan read_plan(std::istream& in) {
    SamplingPlan plan;
    plan.d = next<int>(in, "d");
    plan.k = next<int>(in, "k");
    plan.m = next<int>(in, "m");
    plan.R = next<double>(in, "R");
    plan.slice_count = next<int>(in, "slice_count");
    plan.seed = next<std::uint64_t>(in, "seed");
    if (plan.d < 1 || plan.k < 1 || plan.m < plan.d ||
        (plan.slice_count != 2 && plan.slice_count != 3))
        throw DomainError("plan header out of range");
    plan.gaussian_samples.resize(plan.m, plan.d);
    for (int i = 0; i < plan.m; ++i)
        for (int c = 0; c < plan.d; ++c) plan.gaussian_samples(i, c) = next<double>(in, "sample");
    plan.v.resize(plan.d);
    for (int c = 0; c < plan.d; ++c) plan.v[c] = next<double>(in, "v");
    return plan;
}

void write_tensor(std::ostream& out, const ComplexTensor3& T) {
    put_u64(out, 3);
    put_u64(out, static_cast<std::uint64_t>(T.dim1()));
    put_u64(out, static_cast<std::uint64_t>(T.dim2()));
    put_u64(out, static_cast<std::uint64_t>(T.dim3()));
    for (Eigen::Index i1 = 0; i1 < T.dim1(); ++i1)
        for (Eigen::Index i2 = 0; i2 < T.dim2(); ++i2)
            for (Eigen::Index i3 = 0; i3 < T.dim3(); ++i3) {
                put_f64(out, T(i1, i2, i3).real());
                put_f64(out, T(i1, i2, i3).imag());
            }
    check_stream(out);
}

ComplexTensor3 read_tensor(std::istream& in) {
    if (get_u64(in) != 3) throw DomainError("tensor file: expected order 3");
    std::array<std::int64_t, 3> dims;
    for (auto& m : dims) {
        m = static_cast<std::int64_t>(get_u64(in));
        if (m < 0 || m > (std::int64_t{1} << 20)) throw DomainError("tensor file: bad dimension");
    }
    ComplexTensor3 T(dims[0], dims[1], dims[2]);
    for (Eigen::Index i1 = 0; i1 < T.dim1(); ++i1)
        for (Eigen::Index i2 = 0; i2 < T.dim2(); ++i2)
            for (Eigen::Index i3 = 0; i3 < T.dim3(); ++i3) {
                const double re = get_f64(in);
                T(i1, i2, i3) = {re, get_f64(in)};
            }
    return T;
}

void write_samples(std::ostream& out, const PointMatrix& samples) {
    put_u64(out, static_cast<std::uint64_t>(samples.rows()));
    put_u64(out, static_cast<std::uint64_t>(samples.cols()));
    for (Eigen::Index i = 0; i < samples.rows(); ++i)
        for (Eigen::Index c = 0; c < samples.cols(); ++c) put_f64(out, samples(i, c));
    check_stream(out);
}

PointMatrix read_samples(std::istream& in) {
    const std::uint64_t n = get_u64(in);
    const std::uint64_t d = get_u64(in);
    if (d == 0 || d > 4096 || n > (std::uint64_t{1} << 32))
        throw DomainError("sample file: header out of range");
    PointMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index c = 0; c < x.cols(); ++c) x(i, c) = get_f64(in);
    return x;
}

}  // namespace superres::io
