#include "ifd/model.hpp"

#include <cmath>

namespace ifd {

Eigen::Index ChannelUplink::user_offset(int l) const {
  Eigen::Index off = 0;
  for (int i = 0; i < l; ++i) off += user_antennas[static_cast<size_t>(i)];
  return off;
}

Mat ChannelUplink::user_block(int l) const {
  return entries.middleCols(user_offset(l), user_antennas[static_cast<size_t>(l)]);
}

Mat ChannelDownlink::stacked() const {
  Eigen::Index m = 0;
  for (const Mat& b : blocks) m += b.rows();
  Mat out(m, tx_antennas());
  Eigen::Index row = 0;
  for (const Mat& b : blocks) {
    out.middleRows(row, b.rows()) = b;
    row += b.rows();
  }
  return out;
}

ChannelDownlink transpose_channel(const ChannelUplink& h) {
  ChannelDownlink d;
  d.blocks.reserve(h.user_antennas.size());
  for (int l = 0; l < h.num_users(); ++l) {
    d.blocks.push_back(h.user_block(l).transpose());
  }
  return d;
}

ChannelUplink transpose_channel(const ChannelDownlink& h) {
  ChannelUplink u;
  u.user_antennas.reserve(h.blocks.size());
  Eigen::Index m = 0;
  for (const Mat& b : h.blocks) {
    u.user_antennas.push_back(static_cast<int>(b.rows()));
    m += b.rows();
  }
  u.entries.resize(h.tx_antennas(), m);
  Eigen::Index col = 0;
  for (const Mat& b : h.blocks) {
    u.entries.middleCols(col, b.rows()) = b.transpose();
    col += b.rows();
  }
  return u;
}

Mat UplinkConfig::beamforming_matrix() const {
  const Eigen::Index m = channel.tx_antennas();
  const int num_users = channel.num_users();
  Mat out = Mat::Zero(m, num_users);
  Eigen::Index row = 0;
  for (int l = 0; l < num_users; ++l) {
    out.col(l).segment(row, c[static_cast<size_t>(l)].size()) = c[static_cast<size_t>(l)];
    row += c[static_cast<size_t>(l)].size();
  }
  return out;
}

double UplinkConfig::consumed_power() const {
  double total = 0.0;
  for (int l = 0; l < channel.num_users(); ++l) {
    total += c[static_cast<size_t>(l)].squaredNorm() * p.diagonal(l);
  }
  return total;
}

double DownlinkConfig::consumed_power() const {
  double total = 0.0;
  for (Eigen::Index l = 0; l < b.cols(); ++l) {
    total += b.col(l).squaredNorm() * p.diagonal(l);
  }
  return total;
}

namespace {

std::optional<error> check_power(const PowerAllocation& p, int num_users, double consumed) {
  if (p.diagonal.size() != num_users) {
    return error(errc::dimension_mismatch, "power allocation size != user count");
  }
  if (!(p.budget > 0.0) || !std::isfinite(p.budget)) {
    return error(errc::nonpositive_power, "total power budget must be positive");
  }
  for (Eigen::Index l = 0; l < p.diagonal.size(); ++l) {
    if (!(p.diagonal(l) >= 0.0) || !std::isfinite(p.diagonal(l))) {
      return error(errc::nonpositive_power, "per-user powers must be finite and >= 0");
    }
  }
  if (consumed > p.budget * (1.0 + kPowerBudgetSlack)) {
    return error(errc::power_budget_exceeded, "consumed power exceeds the total budget");
  }
  return std::nullopt;
}

std::optional<error> check_integer_matrix(const IntMat& a, int num_users) {
  if (a.rows() != num_users || a.cols() != num_users) {
    return error(errc::dimension_mismatch, "integer matrix must be L x L");
  }
  if (!int_full_rank(a)) {
    return error(errc::rank_deficient_integer_matrix, "integer matrix is singular");
  }
  return std::nullopt;
}

}  // namespace

std::optional<error> validate(const UplinkConfig& cfg) {
  const int num_users = cfg.channel.num_users();
  if (num_users == 0) return error(errc::dimension_mismatch, "no users");
  Eigen::Index m = 0;
  for (int antennas : cfg.channel.user_antennas) {
    if (antennas <= 0) return error(errc::dimension_mismatch, "user antenna counts must be positive");
    m += antennas;
  }
  if (cfg.channel.entries.cols() != m) {
    return error(errc::dimension_mismatch, "channel columns != sum of user antennas");
  }
  if (!cfg.channel.entries.allFinite()) {
    return error(errc::nonfinite_entries, "channel entries must be finite");
  }
  if (auto err = check_integer_matrix(cfg.a, num_users)) return err;
  if (cfg.b.rows() != num_users || cfg.b.cols() != cfg.channel.rx_antennas()) {
    return error(errc::dimension_mismatch, "equalization matrix must be L x N");
  }
  if (!cfg.b.allFinite()) return error(errc::nonfinite_entries, "equalizer entries must be finite");
  if (static_cast<int>(cfg.c.size()) != num_users) {
    return error(errc::dimension_mismatch, "beamformer count != user count");
  }
  for (int l = 0; l < num_users; ++l) {
    const Vec& cl = cfg.c[static_cast<size_t>(l)];
    if (cl.size() != cfg.channel.user_antennas[static_cast<size_t>(l)]) {
      return error(errc::dimension_mismatch, "beamformer length != user antenna count");
    }
    if (!cl.allFinite()) return error(errc::nonfinite_entries, "beamformer entries must be finite");
  }
  return check_power(cfg.p, num_users, cfg.consumed_power());
}

std::optional<error> validate(const DownlinkConfig& cfg) {
  const int num_users = cfg.channel.num_users();
  if (num_users == 0) return error(errc::dimension_mismatch, "no users");
  const Eigen::Index n = cfg.channel.tx_antennas();
  for (const Mat& blk : cfg.channel.blocks) {
    if (blk.cols() != n) return error(errc::dimension_mismatch, "channel blocks must share column count");
    if (blk.rows() <= 0) return error(errc::dimension_mismatch, "channel blocks must be nonempty");
    if (!blk.allFinite()) return error(errc::nonfinite_entries, "channel entries must be finite");
  }
  if (auto err = check_integer_matrix(cfg.a, num_users)) return err;
  if (cfg.b.rows() != n || cfg.b.cols() != num_users) {
    return error(errc::dimension_mismatch, "beamforming matrix must be N x L");
  }
  if (!cfg.b.allFinite()) return error(errc::nonfinite_entries, "beamformer entries must be finite");
  if (static_cast<int>(cfg.c.size()) != num_users) {
    return error(errc::dimension_mismatch, "equalizer count != user count");
  }
  for (int m = 0; m < num_users; ++m) {
    const Vec& cm = cfg.c[static_cast<size_t>(m)];
    if (cm.size() != cfg.channel.blocks[static_cast<size_t>(m)].rows()) {
      return error(errc::dimension_mismatch, "equalizer length != receiver antenna count");
    }
    if (!cm.allFinite()) return error(errc::nonfinite_entries, "equalizer entries must be finite");
  }
  return check_power(cfg.p, num_users, cfg.consumed_power());
}

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::dimension_mismatch: return "dimension-mismatch";
    case errc::power_budget_exceeded: return "power-budget-exceeded";
    case errc::rank_deficient_integer_matrix: return "rank-deficient-integer-matrix";
    case errc::nonfinite_entries: return "nonfinite-entries";
    case errc::nonpositive_power: return "nonpositive-power";
    case errc::numerically_singular_gram: return "numerically-singular-gram";
    case errc::invalid_delta: return "invalid-delta";
    case errc::nonpositive_beta: return "nonpositive-beta";
    case errc::not_a_z_matrix: return "not-a-z-matrix";
    case errc::not_m_matrix: return "not-m-matrix";
    case errc::unbounded_rate: return "unbounded-rate";
    case errc::infeasible_duality_step: return "infeasible-duality-step";
    case errc::degenerate_beta: return "degenerate-beta";
    case errc::multi_antenna_user_unsupported: return "multi-antenna-user-unsupported";
    case errc::singular_mod_p: return "singular-mod-p";
    case errc::zero_leading_minor: return "zero-leading-minor";
    case errc::verification_failed: return "verification-failed";
    case errc::prime_search_exhausted: return "prime-search-exhausted";
    case errc::degenerate_fraction_exceeded: return "degenerate-fraction-exceeded";
    case errc::io_error: return "io-error";
  }
  return "unknown-error";
}

}  // namespace ifd
