#pragma once

#include "ifd/model.hpp"

namespace ifd {

// Linear system behind the dual power solve: (I - diag(beta) m) rho = weights . beta.
// m is entrywise nonnegative; weights holds ||b_m||^2 (uplink) or ||c_m||^2 (downlink).
struct DualitySystem {
  Mat m;
  Vec weights;
  Vec beta;
};

DualitySystem build_uplink_system(const UplinkConfig& cfg, const Vec& beta);
DualitySystem build_downlink_system(const DownlinkConfig& cfg, const Vec& beta);

// Nonsingular M-matrix test for a Z-matrix: every real eigenvalue positive.
// Throws not-a-z-matrix when an off-diagonal entry is positive.
bool verify_m_matrix(const Mat& f);

// rho = (I - diag(beta) m)^{-1} (weights . beta), clamped at tiny negative round-off.
// Throws not-m-matrix when the SINR profile is infeasible for this geometry.
Vec solve_dual_powers(const DualitySystem& sys);

// Full transform between dual configurations: exchanges the roles of the
// equalization and beamforming matrices (transposed) and solves for the unique
// power allocation that re-establishes every effective SINR with the same
// total consumed power.
DownlinkConfig dual_transform(const UplinkConfig& cfg, const Vec& beta);
UplinkConfig dual_transform(const DownlinkConfig& cfg, const Vec& beta);

// True iff sum(rates_d) >= sum(rates_u) - 1e-9. Callers must ensure all uplink
// rates are positive, the hypothesis under which the inequality is guaranteed.
bool sum_rate_compare(const Vec& rates_u, const Vec& rates_d);

}  // namespace ifd
