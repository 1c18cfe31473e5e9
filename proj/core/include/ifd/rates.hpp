#pragma once

#include <utility>
#include <vector>

#include "ifd/model.hpp"

namespace ifd {

enum class Direction { uplink, downlink };

// Effective noise variances sigma_m^2 = ||b_m||^2 + ||(b_m^T H C - a_m^T) P^{1/2}||^2.
Vec uplink_effective_noise(const UplinkConfig& cfg);

// Mirror image with sigma_m^2 = ||c_m||^2 + ||(c_m^T H_m B - a_m^T) P^{1/2}||^2.
Vec downlink_effective_noise(const DownlinkConfig& cfg);

// MMSE-style closed form B = A P C^T H^T (I + H C P C^T H^T)^{-1}; minimizes every
// effective noise variance simultaneously.
Mat optimal_uplink_equalizer(const ChannelUplink& h, const std::vector<Vec>& c,
                             const PowerAllocation& p, const IntMat& a);

// Per-receiver closed form c_m^T = a_m^T P B^T H_m^T (I + H_m B P B^T H_m^T)^{-1}.
Vec optimal_downlink_equalizer(const Mat& h_m, const Mat& b_d, const PowerAllocation& p_d,
                               const Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic>& a_m);

// Identity-permutation admissibility checks.
bool check_identity_admissible_uplink(const Vec& sigma_sq, const IntMat& a);
bool check_identity_admissible_downlink(const PowerAllocation& p, const IntMat& a);

// pi sorts the order key (increasing noise variances for the uplink, decreasing
// powers for the downlink; ties by original index). theta is found greedily so
// that the row-and-column permuted matrix has full-rank leading principal
// submatrices; existence is guaranteed by full rank of `a`.
std::pair<std::vector<int>, std::vector<int>> find_admissible_permutations(
    const IntMat& a, const Vec& order_key, Direction direction);

// Achievable rates R = 1/2 log2^+(P/sigma^2) under the given pairing.
// Uplink: R[theta[m]] = log+(P[theta[m]] / sigma_sq[pi[m]]).
// Downlink: R[theta[m]] = log+(P[pi[m]] / sigma_sq[theta[m]]).
Vec if_rates(const PowerAllocation& p, const Vec& sigma_sq, const std::vector<int>& pi,
             const std::vector<int>& theta, Direction direction);

// Conventional linear rates with the unit noise term included in the denominator.
Vec conventional_rates(const UplinkConfig& cfg);
Vec conventional_rates(const DownlinkConfig& cfg);

// Stats bundle: noise variances, SINRs beta = P/sigma^2, permutations, and rates.
EffectiveStats effective_stats(const UplinkConfig& cfg);
EffectiveStats effective_stats(const DownlinkConfig& cfg);

}  // namespace ifd
