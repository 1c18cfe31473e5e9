#pragma once

#include <optional>
#include <vector>

#include "ifd/model.hpp"
#include "ifd/rates.hpp"

namespace ifd {

struct OptimizerOptions {
  double tol = 1e-8;       // max relative SINR change between iterations
  int max_iters = 500;
  double lll_delta = 0.75;
  double beta_floor = 1e-12;  // below this any SINR aborts the run
};

// Two-block coordinate descent state. sum_rate_trace is nondecreasing up to
// 1e-9 slack; converged is false when the iteration cap binds or the run was
// aborted (abort_reason set, final_* holds the last valid iterate).
struct OptimizerReport {
  int iterations = 0;
  std::vector<Vec> beta_trace;
  std::vector<double> sum_rate_trace;
  bool converged = false;
  std::optional<errc> abort_reason;
  std::optional<UplinkConfig> final_uplink;
  std::optional<DownlinkConfig> final_downlink;
  EffectiveStats stats;

  double final_sum_rate() const { return sum_rate_trace.empty() ? 0.0 : sum_rate_trace.back(); }
};

// Unit-norm block-identity beams, uniform powers scaled to consume the budget,
// zero equalizer (the first loop step overwrites it), identity integer matrix.
UplinkConfig default_uplink_init(const ChannelUplink& h, double p_total);

// Dual image of the uplink default on the transposed channel, so uplink and
// downlink runs descend along dual trajectories.
DownlinkConfig default_downlink_init(const ChannelDownlink& h, double p_total, const IntMat& a);

OptimizerReport iterate_uplink(const ChannelUplink& h, double p_total, const IntMat& a,
                               const UplinkConfig& init, const OptimizerOptions& opts = {});

OptimizerReport iterate_downlink(const ChannelDownlink& h, double p_total, const IntMat& a,
                                 const DownlinkConfig& init, const OptimizerOptions& opts = {});

// Sum of 1/2 log2^+(beta) over users, the objective the descent maximizes.
double sum_rate_from_beta(const Vec& beta);

}  // namespace ifd
