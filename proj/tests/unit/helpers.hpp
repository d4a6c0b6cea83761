#pragma once

#include <cmath>

#include "schro/common.hpp"
#include "schro/kron.hpp"

namespace testing {

inline double rel_err(const schro::CVec& a, const schro::CVec& b) { return (a - b).norm() / b.norm(); }

inline schro::CMat kron(const schro::CMat& A, const schro::CMat& B) {
    schro::CMat K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

}  // namespace testing
