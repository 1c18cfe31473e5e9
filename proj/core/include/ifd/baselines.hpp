#pragma once

#include <utility>

#include "ifd/model.hpp"
#include "ifd/optimizer.hpp"

namespace ifd {

// Sum capacity of the MIMO MAC under a total power constraint, restricted to
// single-antenna users: max over p >= 0, sum(p) <= p_total of
// 1/2 log2 det(I + H diag(p) H^T). Solved by projected gradient ascent on the
// simplex; terminates when the Frank-Wolfe gap drops below tol.
double mac_sum_capacity(const ChannelUplink& h, double p_total, double tol = 1e-7);

// Same solve, also returning the maximizing power vector.
std::pair<double, Vec> mac_sum_capacity_alloc(const ChannelUplink& h, double p_total,
                                              double tol = 1e-7);

// BC sum capacity equals the dual MAC sum capacity on the transposed channel.
double bc_sum_capacity(const ChannelDownlink& h, double p_total, double tol = 1e-7);

// Conventional linear baseline: the duality descent with the integer matrix
// pinned to the identity, which yields MMSE-grade rates. The historical
// "zero-forcing" label is kept for output parity.
double zf_baseline(const ChannelUplink& h, double p_total, const OptimizerOptions& opts = {});

struct ConstantGapResult {
  double if_sum;
  double capacity;
  bool gap_bound_ok;
};

// Capacity-achieving dual-MAC allocation, LLL integer matrix, optimal
// equalizers, and the transform to the downlink; checks
// if_sum >= capacity - (L/2) log2 L - 1e-6.
ConstantGapResult constant_gap_check(const ChannelDownlink& h, double p_total);

}  // namespace ifd
