#include "ifd/optimizer.hpp"

#include <cmath>

#include "ifd/duality.hpp"
#include "ifd/lattice.hpp"

namespace ifd {

double sum_rate_from_beta(const Vec& beta) {
  double total = 0.0;
  for (Eigen::Index l = 0; l < beta.size(); ++l) {
    total += 0.5 * std::max(0.0, std::log2(beta(l)));
  }
  return total;
}

UplinkConfig default_uplink_init(const ChannelUplink& h, double p_total) {
  const int num_users = h.num_users();
  UplinkConfig cfg;
  cfg.channel = h;
  cfg.a = IntMat::Identity(num_users, num_users);
  cfg.b = Mat::Zero(num_users, h.rx_antennas());
  cfg.c.reserve(static_cast<size_t>(num_users));
  for (int l = 0; l < num_users; ++l) {
    Vec beam = Vec::Zero(h.user_antennas[static_cast<size_t>(l)]);
    beam(0) = 1.0;
    cfg.c.push_back(std::move(beam));
  }
  cfg.p.diagonal = Vec::Constant(num_users, p_total / num_users);
  cfg.p.budget = p_total;
  return cfg;
}

DownlinkConfig default_downlink_init(const ChannelDownlink& h, double p_total, const IntMat& a) {
  UplinkConfig up = default_uplink_init(transpose_channel(h), p_total);
  up.a = a.transpose();
  up.b = optimal_uplink_equalizer(up.channel, up.c, up.p, up.a);
  Vec beta = up.p.diagonal.cwiseQuotient(uplink_effective_noise(up));
  return dual_transform(up, beta);
}

namespace {

double max_relative_change(const Vec& from, const Vec& to) {
  double worst = 0.0;
  for (Eigen::Index l = 0; l < from.size(); ++l) {
    const double denom = std::max(std::abs(from(l)), 1e-300);
    worst = std::max(worst, std::abs(to(l) - from(l)) / denom);
  }
  return worst;
}

void check_beta_floor(const Vec& beta, double floor) {
  for (Eigen::Index l = 0; l < beta.size(); ++l) {
    if (!(beta(l) > floor)) {
      throw error(errc::degenerate_beta, "effective SINR collapsed during iteration");
    }
  }
}

}  // namespace

OptimizerReport iterate_uplink(const ChannelUplink& h, double p_total, const IntMat& a,
                               const UplinkConfig& init, const OptimizerOptions& opts) {
  OptimizerReport report;
  UplinkConfig cfg = init;
  cfg.channel = h;
  cfg.a = a;
  cfg.p.budget = p_total;

  Vec beta = cfg.p.diagonal.cwiseQuotient(uplink_effective_noise(cfg));
  report.beta_trace.push_back(beta);
  report.sum_rate_trace.push_back(sum_rate_from_beta(beta));

  try {
    check_beta_floor(beta, opts.beta_floor);
    for (int it = 1; it <= opts.max_iters; ++it) {
      UplinkConfig next = cfg;
      next.b = optimal_uplink_equalizer(next.channel, next.c, next.p, next.a);
      Vec beta_mid = next.p.diagonal.cwiseQuotient(uplink_effective_noise(next));
      check_beta_floor(beta_mid, opts.beta_floor);

      // Virtual dual downlink: reuse the equalizers as beamformers.
      DownlinkConfig dual = dual_transform(next, beta_mid);
      for (int m = 0; m < dual.channel.num_users(); ++m) {
        dual.c[static_cast<size_t>(m)] = optimal_downlink_equalizer(
            dual.channel.blocks[static_cast<size_t>(m)], dual.b, dual.p, dual.a.row(m));
      }
      beta_mid = dual.p.diagonal.cwiseQuotient(downlink_effective_noise(dual));
      check_beta_floor(beta_mid, opts.beta_floor);

      // Back to the uplink with the improved beams and re-established SINRs.
      next.c = dual.c;
      next.p.diagonal = solve_dual_powers(build_uplink_system(next, beta_mid));
      Vec beta_next = next.p.diagonal.cwiseQuotient(uplink_effective_noise(next));
      check_beta_floor(beta_next, opts.beta_floor);

      cfg = std::move(next);
      report.iterations = it;
      report.beta_trace.push_back(beta_next);
      report.sum_rate_trace.push_back(sum_rate_from_beta(beta_next));
      const double change = max_relative_change(beta, beta_next);
      beta = std::move(beta_next);
      if (change < opts.tol) {
        report.converged = true;
        break;
      }
    }
  } catch (const error& err) {
    if (err.code() == errc::not_m_matrix || err.code() == errc::nonpositive_beta) {
      report.abort_reason = errc::infeasible_duality_step;
    } else if (err.code() == errc::degenerate_beta) {
      report.abort_reason = errc::degenerate_beta;
    } else {
      throw;
    }
  }

  report.final_uplink = cfg;
  report.stats = effective_stats(cfg);
  return report;
}

OptimizerReport iterate_downlink(const ChannelDownlink& h, double p_total, const IntMat& a,
                                 const DownlinkConfig& init, const OptimizerOptions& opts) {
  OptimizerReport report;
  DownlinkConfig cfg = init;
  cfg.channel = h;
  cfg.a = a;
  cfg.p.budget = p_total;

  Vec beta = cfg.p.diagonal.cwiseQuotient(downlink_effective_noise(cfg));
  report.beta_trace.push_back(beta);
  report.sum_rate_trace.push_back(sum_rate_from_beta(beta));

  try {
    check_beta_floor(beta, opts.beta_floor);
    for (int it = 1; it <= opts.max_iters; ++it) {
      DownlinkConfig next = cfg;
      for (int m = 0; m < next.channel.num_users(); ++m) {
        next.c[static_cast<size_t>(m)] = optimal_downlink_equalizer(
            next.channel.blocks[static_cast<size_t>(m)], next.b, next.p, next.a.row(m));
      }
      Vec beta_mid = next.p.diagonal.cwiseQuotient(downlink_effective_noise(next));
      check_beta_floor(beta_mid, opts.beta_floor);

      // Virtual dual uplink: the downlink equalizers become beamformers.
      UplinkConfig dual = dual_transform(next, beta_mid);
      dual.b = optimal_uplink_equalizer(dual.channel, dual.c, dual.p, dual.a);
      beta_mid = dual.p.diagonal.cwiseQuotient(uplink_effective_noise(dual));
      check_beta_floor(beta_mid, opts.beta_floor);

      next.b = dual.b.transpose();
      next.p.diagonal = solve_dual_powers(build_downlink_system(next, beta_mid));
      Vec beta_next = next.p.diagonal.cwiseQuotient(downlink_effective_noise(next));
      check_beta_floor(beta_next, opts.beta_floor);

      cfg = std::move(next);
      report.iterations = it;
      report.beta_trace.push_back(beta_next);
      report.sum_rate_trace.push_back(sum_rate_from_beta(beta_next));
      const double change = max_relative_change(beta, beta_next);
      beta = std::move(beta_next);
      if (change < opts.tol) {
        report.converged = true;
        break;
      }
    }
  } catch (const error& err) {
    if (err.code() == errc::not_m_matrix || err.code() == errc::nonpositive_beta) {
      report.abort_reason = errc::infeasible_duality_step;
    } else if (err.code() == errc::degenerate_beta) {
      report.abort_reason = errc::degenerate_beta;
    } else {
      throw;
    }
  }

  report.final_downlink = cfg;
  report.stats = effective_stats(cfg);
  return report;
}

}  // namespace ifd
