#include "ifd/duality.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ifd {

namespace {

void require_positive_beta(const Vec& beta) {
  for (Eigen::Index l = 0; l < beta.size(); ++l) {
    if (!(beta(l) > 0.0) || !std::isfinite(beta(l))) {
      throw error(errc::nonpositive_beta, "duality requires every effective SINR > 0");
    }
  }
}

}  // namespace

DualitySystem build_uplink_system(const UplinkConfig& cfg, const Vec& beta) {
  require_positive_beta(beta);
  const int num_users = cfg.channel.num_users();
  const Mat gains = cfg.b * (cfg.channel.entries * cfg.beamforming_matrix());
  DualitySystem sys;
  sys.m.resize(num_users, num_users);
  sys.weights.resize(num_users);
  for (int m = 0; m < num_users; ++m) {
    for (int l = 0; l < num_users; ++l) {
      const double mismatch = gains(m, l) - static_cast<double>(cfg.a(m, l));
      sys.m(m, l) = mismatch * mismatch;
    }
    sys.weights(m) = cfg.b.row(m).squaredNorm();
  }
  sys.beta = beta;
  return sys;
}

DualitySystem build_downlink_system(const DownlinkConfig& cfg, const Vec& beta) {
  require_positive_beta(beta);
  const int num_users = cfg.channel.num_users();
  DualitySystem sys;
  sys.m.resize(num_users, num_users);
  sys.weights.resize(num_users);
  for (int m = 0; m < num_users; ++m) {
    const Vec& cm = cfg.c[static_cast<size_t>(m)];
    const Vec gains = (cm.transpose() * cfg.channel.blocks[static_cast<size_t>(m)] * cfg.b).transpose();
    for (int l = 0; l < num_users; ++l) {
      const double mismatch = gains(l) - static_cast<double>(cfg.a(m, l));
      sys.m(m, l) = mismatch * mismatch;
    }
    sys.weights(m) = cm.squaredNorm();
  }
  sys.beta = beta;
  return sys;
}

bool verify_m_matrix(const Mat& f) {
  const Eigen::Index n = f.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && f(i, j) > 0.0) {
        throw error(errc::not_a_z_matrix, "off-diagonal entries must be nonpositive");
      }
    }
  }
  Eigen::EigenSolver<Mat> eig(f);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto lambda = eig.eigenvalues()(i);
    if (std::abs(lambda.imag()) <= 1e-10 && lambda.real() <= 0.0) return false;
  }
  return true;
}

Vec solve_dual_powers(const DualitySystem& sys) {
  const Eigen::Index n = sys.beta.size();
  const Mat f = Mat::Identity(n, n) - sys.beta.asDiagonal() * sys.m;
  if (!verify_m_matrix(f)) {
    throw error(errc::not_m_matrix, "SINR profile infeasible for this geometry");
  }
  Vec rho = Eigen::PartialPivLU<Mat>(f).solve(sys.weights.cwiseProduct(sys.beta).eval());
  for (Eigen::Index l = 0; l < n; ++l) {
    if (rho(l) < -1e-12) {
      throw error(errc::not_m_matrix, "dual power solve produced a negative power");
    }
    rho(l) = std::max(rho(l), 0.0);
  }
  return rho;
}

DownlinkConfig dual_transform(const UplinkConfig& cfg, const Vec& beta) {
  require_positive_beta(beta);
  DownlinkConfig dual;
  dual.channel = transpose_channel(cfg.channel);
  dual.a = cfg.a.transpose();
  dual.b = cfg.b.transpose();
  dual.c = cfg.c;  // C_d = C_u^T: block rows are the uplink beamformers
  dual.p.diagonal = Vec::Zero(beta.size());
  dual.p.budget = cfg.p.budget;
  dual.p.diagonal = solve_dual_powers(build_downlink_system(dual, beta));
  return dual;
}

UplinkConfig dual_transform(const DownlinkConfig& cfg, const Vec& beta) {
  require_positive_beta(beta);
  UplinkConfig dual;
  dual.channel = transpose_channel(cfg.channel);
  dual.a = cfg.a.transpose();
  dual.b = cfg.b.transpose();
  dual.c = cfg.c;  // C_u = C_d^T: block columns are the downlink equalizers
  dual.p.diagonal = Vec::Zero(beta.size());
  dual.p.budget = cfg.p.budget;
  dual.p.diagonal = solve_dual_powers(build_uplink_system(dual, beta));
  return dual;
}

bool sum_rate_compare(const Vec& rates_u, const Vec& rates_d) {
  return rates_d.sum() >= rates_u.sum() - 1e-9;
}

}  // namespace ifd
