#include "ifd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ifd/duality.hpp"
#include "ifd/lattice.hpp"
#include "ifd/rates.hpp"

namespace ifd {

namespace {

constexpr double kLog2E = 1.4426950408889634;

double objective_bits(const Mat& h, const Vec& p) {
  const Eigen::Index n = h.rows();
  const Mat cov = Mat::Identity(n, n) + h * p.asDiagonal() * h.transpose();
  return 0.5 * std::log2(Eigen::PartialPivLU<Mat>(cov).determinant());
}

Vec gradient_bits(const Mat& h, const Vec& p) {
  const Eigen::Index n = h.rows();
  const Mat cov = Mat::Identity(n, n) + h * p.asDiagonal() * h.transpose();
  const Mat cov_inv = cov.inverse();
  Vec g(h.cols());
  for (Eigen::Index l = 0; l < h.cols(); ++l) {
    g(l) = 0.5 * kLog2E * h.col(l).dot(cov_inv * h.col(l));
  }
  return g;
}

// Euclidean projection onto {p >= 0, sum(p) <= budget}.
Vec project_simplex(Vec p, double budget) {
  p = p.cwiseMax(0.0);
  if (p.sum() <= budget) return p;
  // Water-level threshold for the equality simplex.
  std::vector<double> sorted(p.data(), p.data() + p.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double candidate = (cumsum - budget) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
      tau = candidate;
      break;
    }
  }
  return (p.array() - tau).cwiseMax(0.0).matrix();
}

}  // namespace

std::pair<double, Vec> mac_sum_capacity_alloc(const ChannelUplink& h, double p_total, double tol) {
  for (int antennas : h.user_antennas) {
    if (antennas != 1) {
      throw error(errc::multi_antenna_user_unsupported,
                  "sum capacity solve supports single-antenna users only");
    }
  }
  if (!(tol > 0.0)) throw error(errc::nonpositive_power, "tolerance must be positive");

  const Mat& mat = h.entries;
  const Eigen::Index num_users = mat.cols();
  Vec p = Vec::Constant(num_users, p_total / static_cast<double>(num_users));
  double value = objective_bits(mat, p);

  const int max_iters = 20000;
  double step = 1.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vec grad = gradient_bits(mat, p);
    // Frank-Wolfe gap over the scaled simplex: best vertex is p_total e_l or 0.
    const double best_vertex = p_total * std::max(0.0, grad.maxCoeff());
    const double gap = best_vertex - grad.dot(p);
    if (gap < tol) break;

    // Armijo backtracking along the projected path.
    step = std::min(step * 2.0, 1e6);
    bool progressed = false;
    while (step >= 1e-18) {
      const Vec candidate = project_simplex(p + step * grad, p_total);
      const double candidate_value = objective_bits(mat, candidate);
      if (candidate_value >= value + 1e-4 * grad.dot(candidate - p)) {
        p = candidate;
        value = candidate_value;
        progressed = true;
        break;
      }
      step *= 0.5;
    }
    if (!progressed) break;
  }
  return {value, p};
}

double mac_sum_capacity(const ChannelUplink& h, double p_total, double tol) {
  return mac_sum_capacity_alloc(h, p_total, tol).first;
}

double bc_sum_capacity(const ChannelDownlink& h, double p_total, double tol) {
  return mac_sum_capacity(transpose_channel(h), p_total, tol);
}

double zf_baseline(const ChannelUplink& h, double p_total, const OptimizerOptions& opts) {
  const IntMat identity = IntMat::Identity(h.num_users(), h.num_users());
  const OptimizerReport report =
      iterate_uplink(h, p_total, identity, default_uplink_init(h, p_total), opts);
  if (report.abort_reason) {
    throw error(*report.abort_reason, "baseline optimization aborted");
  }
  return report.final_sum_rate();
}

ConstantGapResult constant_gap_check(const ChannelDownlink& h, double p_total) {
  for (const Mat& blk : h.blocks) {
    if (blk.rows() != 1) {
      throw error(errc::multi_antenna_user_unsupported,
                  "constant-gap check supports single-antenna receivers only");
    }
  }
  const ChannelUplink dual_mac = transpose_channel(h);
  const int num_users = dual_mac.num_users();
  auto [capacity, p_opt] = mac_sum_capacity_alloc(dual_mac, p_total);

  // Mix toward uniform so every power is strictly positive; the capacity cost
  // of the mixing is below the 1e-6 slack in the bound.
  const double mix = 1e-9;
  Vec p_used = (1.0 - mix) * p_opt + Vec::Constant(num_users, mix * p_total / num_users);

  UplinkConfig cfg = default_uplink_init(dual_mac, p_total);
  cfg.p.diagonal = p_used;
  auto [a, sigma_sq] = select_integer_matrix(dual_mac, cfg.c, cfg.p);
  cfg.a = a;
  cfg.b = optimal_uplink_equalizer(dual_mac, cfg.c, cfg.p, cfg.a);
  const Vec beta = cfg.p.diagonal.cwiseQuotient(uplink_effective_noise(cfg));

  // Achievable downlink sum under the downlink's own admissible pairing.
  const DownlinkConfig downlink = dual_transform(cfg, beta);
  const double if_sum = effective_stats(downlink).rates.sum();

  const double bound = capacity - 0.5 * num_users * std::log2(static_cast<double>(num_users)) - 1e-6;
  return ConstantGapResult{if_sum, capacity, if_sum >= bound};
}

}  // namespace ifd
