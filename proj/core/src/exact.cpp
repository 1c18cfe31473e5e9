#include "ifd/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace ifd {

namespace {

void check_hadamard_bound(const IntMat& a) {
  // det fits in __int128 whenever prod_i ||row_i|| < 2^126.
  long double log_bound = 0.0L;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    long double s = 0.0L;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const long double v = static_cast<long double>(a(i, j));
      s += v * v;
    }
    log_bound += 0.5L * std::log2(s > 0 ? s : 1.0L);
  }
  if (log_bound > 126.0L) {
    throw std::overflow_error("integer determinant exceeds 128-bit range");
  }
}

}  // namespace

__int128 int_det(const IntMat& a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("int_det: matrix not square");
  if (n == 0) return 1;
  check_hadamard_bound(a);

  std::vector<__int128> m(static_cast<size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m[static_cast<size_t>(i * n + j)] = a(i, j);

  auto at = [&](Eigen::Index i, Eigen::Index j) -> __int128& {
    return m[static_cast<size_t>(i * n + j)];
  };

  int sign = 1;
  __int128 prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      Eigen::Index piv = -1;
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (at(i, k) != 0) {
          piv = i;
          break;
        }
      }
      if (piv < 0) return 0;
      for (Eigen::Index j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return sign > 0 ? at(n - 1, n - 1) : -at(n - 1, n - 1);
}

int int_rank(const IntMat& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (rows == 0 || cols == 0) return 0;
  // Intermediate Bareiss entries are minors of `a`, so the same bound applies.
  check_hadamard_bound(rows <= cols ? a : IntMat(a.transpose()));

  std::vector<__int128> m(static_cast<size_t>(rows * cols));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m[static_cast<size_t>(i * cols + j)] = a(i, j);
  auto at = [&](Eigen::Index i, Eigen::Index j) -> __int128& {
    return m[static_cast<size_t>(i * cols + j)];
  };

  int rank = 0;
  __int128 prev = 1;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (at(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != r) {
      for (Eigen::Index j = 0; j < cols; ++j) std::swap(at(r, j), at(piv, j));
    }
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      for (Eigen::Index j = c + 1; j < cols; ++j) {
        at(i, j) = (at(i, j) * at(r, c) - at(i, c) * at(r, j)) / prev;
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    ++r;
    ++rank;
  }
  return rank;
}

bool int_full_rank(const IntMat& a) {
  const Eigen::Index n = std::min(a.rows(), a.cols());
  return int_rank(a) == static_cast<int>(n);
}

std::vector<__int128> leading_minors(const IntMat& a) {
  const Eigen::Index n = std::min(a.rows(), a.cols());
  std::vector<__int128> minors;
  minors.reserve(static_cast<size_t>(n));
  for (Eigen::Index k = 1; k <= n; ++k) {
    minors.push_back(int_det(a.topLeftCorner(k, k)));
  }
  return minors;
}

bool leading_minors_nonzero(const IntMat& a) {
  for (const __int128 m : leading_minors(a)) {
    if (m == 0) return false;
  }
  return true;
}

}  // namespace ifd
