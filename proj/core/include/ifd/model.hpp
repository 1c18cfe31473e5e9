#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ifd/errors.hpp"
#include "ifd/exact.hpp"

namespace ifd {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Relative slack on the total-power budget, absorbing round-off in traces.
inline constexpr double kPowerBudgetSlack = 1e-9;

// Uplink channel: N receive antennas, L transmitters with M_l antennas each.
// The column blocks of `entries` follow `user_antennas`.
struct ChannelUplink {
  Mat entries;                      // N x M, M = sum(user_antennas)
  std::vector<int> user_antennas;   // M_1..M_L, all positive

  int num_users() const { return static_cast<int>(user_antennas.size()); }
  Eigen::Index rx_antennas() const { return entries.rows(); }
  Eigen::Index tx_antennas() const { return entries.cols(); }
  // Column offset of user l's block.
  Eigen::Index user_offset(int l) const;
  // N x M_l channel block of user l.
  Mat user_block(int l) const;
};

// Downlink channel: per-receiver blocks H_m of shape M_m x N.
struct ChannelDownlink {
  std::vector<Mat> blocks;

  int num_users() const { return static_cast<int>(blocks.size()); }
  Eigen::Index tx_antennas() const { return blocks.empty() ? 0 : blocks.front().cols(); }
  // Blocks stacked into an M x N matrix.
  Mat stacked() const;
};

// Conversions between dual channel pairs (H_d = H_u^T).
ChannelDownlink transpose_channel(const ChannelUplink& h);
ChannelUplink transpose_channel(const ChannelDownlink& h);

// Per-codeword powers P_l plus the total budget the transceiver must respect.
struct PowerAllocation {
  Vec diagonal;    // L entries, >= 0
  double budget;   // > 0
};

struct UplinkConfig {
  ChannelUplink channel;
  IntMat a;              // L x L, full rank over the rationals
  Mat b;                 // L x N equalization, rows b_m^T
  std::vector<Vec> c;    // beamformers, c[l] has length M_l
  PowerAllocation p;

  // M x L block-diagonal beamforming matrix assembled from c.
  Mat beamforming_matrix() const;
  double consumed_power() const;  // Tr(C^T C P)
};

struct DownlinkConfig {
  ChannelDownlink channel;
  IntMat a;              // L x L
  Mat b;                 // N x L beamforming, columns b_l
  std::vector<Vec> c;    // per-receiver equalizers, c[m] has length M_m
  PowerAllocation p;

  double consumed_power() const;  // Tr(B^T B P)
};

// Effective statistics of a configured transceiver. rates pairs powers with
// noise variances through the stored admissible permutations.
struct EffectiveStats {
  Vec sigma_sq;
  Vec beta;
  Vec rates;
  std::vector<int> pi;
  std::vector<int> theta;
};

// First violated invariant, or nullopt when the config is well formed.
std::optional<error> validate(const UplinkConfig& cfg);
std::optional<error> validate(const DownlinkConfig& cfg);

}  // namespace ifd
