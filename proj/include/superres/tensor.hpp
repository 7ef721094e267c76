#pragma once

#include <vector>

#include "superres/types.hpp"

namespace superres {

/// Dense third-order complex tensor, indices 0-based (n1, n2, n3).
///
/// Stored slice-major: entry (i1, i2, i3) lives at i1 + m1 * (i2 + m2 * i3), so
/// each frontal slice T(:, :, i3) is a contiguous column-major m1 x m2 block.
/// The on-disk format (n3 fastest) is handled by the io module.
class ComplexTensor3 {
public:
    ComplexTensor3() = default;
    ComplexTensor3(Eigen::Index m1, Eigen::Index m2, Eigen::Index m3);

    /// Stacks equally sized matrices as frontal slices.
    static ComplexTensor3 from_slices(const std::vector<MatrixXcd>& slices);

    Eigen::Index dim1() const noexcept { return m1_; }
    Eigen::Index dim2() const noexcept { return m2_; }
    Eigen::Index dim3() const noexcept { return m3_; }
    Eigen::Index size() const noexcept { return m1_ * m2_ * m3_; }

    Complex& operator()(Eigen::Index i1, Eigen::Index i2, Eigen::Index i3) {
        return data_[static_cast<std::size_t>(i1 + m1_ * (i2 + m2_ * i3))];
    }
    const Complex& operator()(Eigen::Index i1, Eigen::Index i2, Eigen::Index i3) const {
        return data_[static_cast<std::size_t>(i1 + m1_ * (i2 + m2_ * i3))];
    }

    Complex* data() noexcept { return data_.data(); }
    const Complex* data() const noexcept { return data_.data(); }

    /// Frobenius norm.
    double norm() const;

private:
    Eigen::Index m1_ = 0, m2_ = 0, m3_ = 0;
    std::vector<Complex> data_;
};

/// T(:, :, index). Throws DomainError if index >= dim3.
MatrixXcd slice(const ComplexTensor3& T, Eigen::Index index);

/// Multilinear map T(X_A, X_B, X_C):
///   out[i1,i2,i3] = sum T[j1,j2,j3] X_A[j1,i1] X_B[j2,i2] X_C[j3,i3].
/// Plain transposes only; callers conjugate explicitly where needed.
ComplexTensor3 contract(const ComplexTensor3& T, const MatrixXcd& XA, const MatrixXcd& XB,
                        const MatrixXcd& XC);

/// T(I, I, a) for a vector a of length dim3.
MatrixXcd contract_mode3(const ComplexTensor3& T, const VectorXcd& a);

/// sum_n A[:,n] (x) B[:,n] (x) C[:,n].
ComplexTensor3 factor_product(const MatrixXcd& A, const MatrixXcd& B, const MatrixXcd& C);

}  // namespace superres
