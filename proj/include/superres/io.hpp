#pragma once

// Text and binary interchange formats. Text numbers use std::to_chars /
// std::from_chars (shortest round-trip form, independent of the C locale);
// binary formats are little-endian regardless of the host.

#include <iosfwd>
#include <string>

#include "superres/model.hpp"
#include "superres/sampling.hpp"
#include "superres/tensor.hpp"

namespace superres::io {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Header `d k`, then k lines `w_re w_im mu_1 ... mu_d`.
void write_source_set(std::ostream& out, const SourceSet& source);
SourceSet read_source_set(std::istream& in);

/// Header `d k m R slice_count seed`, m sample rows, then the row of v.
void write_plan(std::ostream& out, const SamplingPlan& plan);
SamplingPlan read_plan(std::istream& in);

/// int64 header {3, m1, m2, m3}, then complex doubles (re, im) in (n1, n2, n3)
/// row-major order, n3 fastest.
void write_tensor(std::ostream& out, const ComplexTensor3& T);
ComplexTensor3 read_tensor(std::istream& in);

/// uint64 header {N, d}, then N * d doubles, one sample after another.
void write_samples(std::ostream& out, const PointMatrix& samples);
PointMatrix read_samples(std::istream& in);

}  // namespace superres::io
