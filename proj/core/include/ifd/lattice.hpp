#pragma once

#include <utility>
#include <vector>

#include "ifd/model.hpp"

namespace ifd {

// Lower-triangular F with positive diagonal satisfying
// F F^T = (P^{-1} + C^T H^T H C)^{-1}. The effective noise of the integer
// row a^T under the optimal equalizer is ||a^T F||^2.
struct CholeskyFactor {
  Mat f;
};

CholeskyFactor cholesky_effective_basis(const ChannelUplink& h, const std::vector<Vec>& c,
                                        const PowerAllocation& p);

// LLL reduction of the row lattice {a^T F : a in Z^L}. Returns a unimodular
// integer matrix whose rows are the reduced basis coefficients, sorted by
// increasing ||a_m^T F||.
IntMat lll_reduce(const CholeskyFactor& f, double delta = 0.75);

// Composition of the two steps above; sigma_sq[m] = ||a_m^T F||^2, nondecreasing.
std::pair<IntMat, Vec> select_integer_matrix(const ChannelUplink& h, const std::vector<Vec>& c,
                                             const PowerAllocation& p, double delta = 0.75);

}  // namespace ifd
