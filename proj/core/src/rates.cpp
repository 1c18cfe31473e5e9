#include "ifd/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ifd {

namespace {

Mat assemble_beamformer(const ChannelUplink& h, const std::vector<Vec>& c) {
  Mat out = Mat::Zero(h.tx_antennas(), h.num_users());
  Eigen::Index row = 0;
  for (int l = 0; l < h.num_users(); ++l) {
    out.col(l).segment(row, c[static_cast<size_t>(l)].size()) = c[static_cast<size_t>(l)];
    row += c[static_cast<size_t>(l)].size();
  }
  return out;
}

double log2_pos(double x) { return std::max(0.0, std::log2(x)); }

}  // namespace

Vec uplink_effective_noise(const UplinkConfig& cfg) {
  const Mat hc = cfg.channel.entries * cfg.beamforming_matrix();
  const Vec sqrt_p = cfg.p.diagonal.cwiseSqrt();
  const int num_users = cfg.channel.num_users();
  Vec sigma_sq(num_users);
  for (int m = 0; m < num_users; ++m) {
    const Vec residual = (cfg.b.row(m) * hc).transpose() - cfg.a.row(m).transpose().cast<double>();
    sigma_sq(m) = cfg.b.row(m).squaredNorm() + residual.cwiseProduct(sqrt_p).squaredNorm();
  }
  return sigma_sq;
}

Vec downlink_effective_noise(const DownlinkConfig& cfg) {
  const Vec sqrt_p = cfg.p.diagonal.cwiseSqrt();
  const int num_users = cfg.channel.num_users();
  Vec sigma_sq(num_users);
  for (int m = 0; m < num_users; ++m) {
    const Vec& cm = cfg.c[static_cast<size_t>(m)];
    const Vec residual = (cm.transpose() * cfg.channel.blocks[static_cast<size_t>(m)] * cfg.b).transpose() -
                         cfg.a.row(m).transpose().cast<double>();
    sigma_sq(m) = cm.squaredNorm() + residual.cwiseProduct(sqrt_p).squaredNorm();
  }
  return sigma_sq;
}

Mat optimal_uplink_equalizer(const ChannelUplink& h, const std::vector<Vec>& c,
                             const PowerAllocation& p, const IntMat& a) {
  const Mat hc = h.entries * assemble_beamformer(h, c);
  const Mat cov = Mat::Identity(h.rx_antennas(), h.rx_antennas()) +
                  hc * p.diagonal.asDiagonal() * hc.transpose();
  // cov = I + PSD, always invertible.
  return a.cast<double>() * p.diagonal.asDiagonal() * hc.transpose() * cov.inverse();
}

Vec optimal_downlink_equalizer(const Mat& h_m, const Mat& b_d, const PowerAllocation& p_d,
                               const Eigen::Matrix<std::int64_t, 1, Eigen::Dynamic>& a_m) {
  const Mat hb = h_m * b_d;
  const Mat cov = Mat::Identity(h_m.rows(), h_m.rows()) +
                  hb * p_d.diagonal.asDiagonal() * hb.transpose();
  return cov.inverse().transpose() * hb * p_d.diagonal.asDiagonal() * a_m.transpose().cast<double>();
}

bool check_identity_admissible_uplink(const Vec& sigma_sq, const IntMat& a) {
  for (Eigen::Index m = 1; m < sigma_sq.size(); ++m) {
    if (sigma_sq(m) < sigma_sq(m - 1)) return false;
  }
  return leading_minors_nonzero(a);
}

bool check_identity_admissible_downlink(const PowerAllocation& p, const IntMat& a) {
  for (Eigen::Index m = 1; m < p.diagonal.size(); ++m) {
    if (p.diagonal(m) > p.diagonal(m - 1)) return false;
  }
  return leading_minors_nonzero(a);
}

namespace {

// Greedy completion: given the first axis fixed by `sorted`, pick indices on the
// other axis so every leading principal minor of the permuted matrix is nonzero.
// Full rank of `a` guarantees the greedy step never gets stuck.
std::vector<int> greedy_completion(const IntMat& a, const std::vector<int>& sorted, bool rows_fixed) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> chosen;
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (int m = 1; m <= n; ++m) {
    bool found = false;
    for (int cand = 0; cand < n && !found; ++cand) {
      if (used[static_cast<size_t>(cand)]) continue;
      IntMat sub(m, m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          const int other = (j < m - 1) ? chosen[static_cast<size_t>(j)] : cand;
          sub(i, j) = rows_fixed ? a(sorted[static_cast<size_t>(i)], other)
                                 : a(other, sorted[static_cast<size_t>(i)]);
        }
      }
      if (int_det(sub) != 0) {
        chosen.push_back(cand);
        used[static_cast<size_t>(cand)] = true;
        found = true;
      }
    }
    if (!found) {
      throw error(errc::rank_deficient_integer_matrix,
                  "no admissible permutation; integer matrix is singular");
    }
  }
  return chosen;
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> find_admissible_permutations(
    const IntMat& a, const Vec& order_key, Direction direction) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> pi(static_cast<size_t>(n));
  std::iota(pi.begin(), pi.end(), 0);
  if (direction == Direction::uplink) {
    std::stable_sort(pi.begin(), pi.end(),
                     [&](int i, int j) { return order_key(i) < order_key(j); });
    // Rows ordered by pi (noise variances increasing); columns completed greedily.
    return {pi, greedy_completion(a, pi, /*rows_fixed=*/true)};
  }
  std::stable_sort(pi.begin(), pi.end(),
                   [&](int i, int j) { return order_key(i) > order_key(j); });
  // Columns ordered by pi (powers decreasing); rows completed greedily.
  return {pi, greedy_completion(a, pi, /*rows_fixed=*/false)};
}

Vec if_rates(const PowerAllocation& p, const Vec& sigma_sq, const std::vector<int>& pi,
             const std::vector<int>& theta, Direction direction) {
  const Eigen::Index n = sigma_sq.size();
  Vec rates = Vec::Zero(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    // The permuted system has the identity admissible: its m-th virtual user is
    // original user theta[m], with power P[theta[m]] (uplink) or P[pi[m]]
    // (downlink, powers sorted by pi) and noise sigma[pi[m]] / sigma[theta[m]].
    const int user = theta[static_cast<size_t>(m)];
    const double power = direction == Direction::uplink ? p.diagonal(user)
                                                        : p.diagonal(pi[static_cast<size_t>(m)]);
    const double noise = direction == Direction::uplink ? sigma_sq(pi[static_cast<size_t>(m)])
                                                        : sigma_sq(user);
    if (noise <= 0.0 && power > 0.0) {
      throw error(errc::unbounded_rate, "zero effective noise with positive power");
    }
    rates(user) = (power <= 0.0) ? 0.0 : 0.5 * log2_pos(power / noise);
  }
  return rates;
}

Vec conventional_rates(const UplinkConfig& cfg) {
  const Mat gains = cfg.b * (cfg.channel.entries * cfg.beamforming_matrix());
  const int num_users = cfg.channel.num_users();
  Vec rates(num_users);
  for (int m = 0; m < num_users; ++m) {
    const double signal = cfg.p.diagonal(m) * gains(m, m) * gains(m, m);
    double denom = cfg.b.row(m).squaredNorm();
    for (int l = 0; l < num_users; ++l) {
      if (l != m) denom += cfg.p.diagonal(l) * gains(m, l) * gains(m, l);
    }
    if (denom <= 0.0) {
      if (signal > 0.0) throw error(errc::unbounded_rate, "zero-denominator SINR");
      rates(m) = 0.0;
      continue;
    }
    rates(m) = 0.5 * std::log2(1.0 + signal / denom);
  }
  return rates;
}

Vec conventional_rates(const DownlinkConfig& cfg) {
  const int num_users = cfg.channel.num_users();
  Vec rates(num_users);
  for (int m = 0; m < num_users; ++m) {
    const Vec& cm = cfg.c[static_cast<size_t>(m)];
    const Vec gains = (cm.transpose() * cfg.channel.blocks[static_cast<size_t>(m)] * cfg.b).transpose();
    const double signal = cfg.p.diagonal(m) * gains(m) * gains(m);
    double denom = cm.squaredNorm();
    for (int l = 0; l < num_users; ++l) {
      if (l != m) denom += cfg.p.diagonal(l) * gains(l) * gains(l);
    }
    if (denom <= 0.0) {
      if (signal > 0.0) throw error(errc::unbounded_rate, "zero-denominator SINR");
      rates(m) = 0.0;
      continue;
    }
    rates(m) = 0.5 * std::log2(1.0 + signal / denom);
  }
  return rates;
}

namespace {

EffectiveStats build_stats(const PowerAllocation& p, Vec sigma_sq, const IntMat& a,
                           Direction direction) {
  EffectiveStats stats;
  stats.sigma_sq = std::move(sigma_sq);
  stats.beta = Vec(stats.sigma_sq.size());
  for (Eigen::Index l = 0; l < stats.beta.size(); ++l) {
    if (stats.sigma_sq(l) > 0.0) {
      stats.beta(l) = p.diagonal(l) / stats.sigma_sq(l);
    } else {
      stats.beta(l) = p.diagonal(l) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
  }
  const Vec& key = direction == Direction::uplink ? stats.sigma_sq : p.diagonal;
  auto [pi, theta] = find_admissible_permutations(a, key, direction);
  stats.rates = if_rates(p, stats.sigma_sq, pi, theta, direction);
  stats.pi = std::move(pi);
  stats.theta = std::move(theta);
  return stats;
}

}  // namespace

EffectiveStats effective_stats(const UplinkConfig& cfg) {
  return build_stats(cfg.p, uplink_effective_noise(cfg), cfg.a, Direction::uplink);
}

EffectiveStats effective_stats(const DownlinkConfig& cfg) {
  return build_stats(cfg.p, downlink_effective_noise(cfg), cfg.a, Direction::downlink);
}

}  // namespace ifd
