#include "superres/tensor.hpp"

#include <cmath>
#include <string>

namespace superres {

namespace {

Eigen::Map<const MatrixXcd> slice_view(const ComplexTensor3& T, Eigen::Index i3) {
    return {T.data() + i3 * T.dim1() * T.dim2(), T.dim1(), T.dim2()};
}

}  // namespace

ComplexTensor3::ComplexTensor3(Eigen::Index m1, Eigen::Index m2, Eigen::Index m3)
    : m1_(m1), m2_(m2), m3_(m3) {
    if (m1 < 0 || m2 < 0 || m3 < 0) throw DomainError("ComplexTensor3: negative dimension");
    data_.assign(static_cast<std::size_t>(m1 * m2 * m3), Complex(0.0, 0.0));
}

ComplexTensor3 ComplexTensor3::from_slices(const std::vector<MatrixXcd>& slices) {
    if (slices.empty()) return {};
    const Eigen::Index r = slices.front().rows();
    const Eigen::Index c = slices.front().cols();
    ComplexTensor3 T(r, c, static_cast<Eigen::Index>(slices.size()));
    for (std::size_t s = 0; s < slices.size(); ++s) {
        if (slices[s].rows() != r || slices[s].cols() != c)
            throw DomainError("from_slices: slices differ in shape");
        Eigen::Map<MatrixXcd>(T.data() + static_cast<Eigen::Index>(s) * r * c, r, c) = slices[s];
    }
    return T;
}

double ComplexTensor3::norm() const {
    double acc = 0.0;
    for (const auto& z : data_) acc += std::norm(z);
    return std::sqrt(acc);
}

MatrixXcd slice(const ComplexTensor3& T, Eigen::Index index) {
    if (index < 0 || index >= T.dim3())
        throw DomainError("slice: index " + std::to_string(index) + " out of range");
    return slice_view(T, index);
}

MatrixXcd contract_mode3(const ComplexTensor3& T, const VectorXcd& a) {
    if (a.size() != T.dim3()) throw DomainError("contract_mode3: vector length mismatch");
    MatrixXcd out = MatrixXcd::Zero(T.dim1(), T.dim2());
    for (Eigen::Index j = 0; j < T.dim3(); ++j) out += a[j] * slice_view(T, j);
    return out;
}

ComplexTensor3 contract(const ComplexTensor3& T, const MatrixXcd& XA, const MatrixXcd& XB,
                        const MatrixXcd& XC) {
    if (XA.rows() != T.dim1() || XB.rows() != T.dim2() || XC.rows() != T.dim3())
        throw DomainError("contract: factor row counts must match tensor dimensions");
    ComplexTensor3 out(XA.cols(), XB.cols(), XC.cols());
    for (Eigen::Index c = 0; c < XC.cols(); ++c) {
        const MatrixXcd mixed = contract_mode3(T, XC.col(c));
        Eigen::Map<MatrixXcd>(out.data() + c * XA.cols() * XB.cols(), XA.cols(), XB.cols()) =
            XA.transpose() * mixed * XB;
    }
    return out;
}

ComplexTensor3 factor_product(const MatrixXcd& A, const MatrixXcd& B, const MatrixXcd& C) {
    if (A.cols() != B.cols() || A.cols() != C.cols())
        throw DomainError("factor_product: factors need equal column counts");
    ComplexTensor3 out(A.rows(), B.rows(), C.rows());
    for (Eigen::Index i3 = 0; i3 < C.rows(); ++i3) {
        Eigen::Map<MatrixXcd>(out.data() + i3 * A.rows() * B.rows(), A.rows(), B.rows()) =
            A * C.row(i3).transpose().asDiagonal() * B.transpose();
    }
    return out;
}

}  // namespace superres
