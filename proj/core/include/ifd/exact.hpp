#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

// Exact integer linear algebra (fraction-free elimination). Floating-point
// rank tests can misclassify near-singular integer matrices, so rank and
// minor decisions throughout the library are made here, over the integers.

namespace ifd {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Exact determinant via Bareiss elimination with row pivoting.
// Throws std::overflow_error if the Hadamard bound exceeds the __int128 range.
__int128 int_det(const IntMat& a);

// Exact rank via fraction-free elimination with full pivoting.
int int_rank(const IntMat& a);

bool int_full_rank(const IntMat& a);

// Determinants of all leading principal submatrices, minors[k] = det(a[0..k][0..k]).
std::vector<__int128> leading_minors(const IntMat& a);

// True iff every leading principal submatrix is nonsingular.
bool leading_minors_nonzero(const IntMat& a);

}  // namespace ifd
