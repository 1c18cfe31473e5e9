#include "ifd/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ifd {

namespace {

// Nearest integer with ties (exact .5 fractions) rounded toward zero.
std::int64_t round_ties_to_zero(double x) {
  const double t = std::trunc(x);
  const double frac = std::abs(x - t);
  if (frac < 0.5) return static_cast<std::int64_t>(t);
  if (frac > 0.5) return static_cast<std::int64_t>(t) + (x > 0 ? 1 : -1);
  return static_cast<std::int64_t>(t);
}

// Assemble the M x L block-diagonal beamforming matrix.
Mat assemble_beamformer(const ChannelUplink& h, const std::vector<Vec>& c) {
  Mat out = Mat::Zero(h.tx_antennas(), h.num_users());
  Eigen::Index row = 0;
  for (int l = 0; l < h.num_users(); ++l) {
    out.col(l).segment(row, c[static_cast<size_t>(l)].size()) = c[static_cast<size_t>(l)];
    row += c[static_cast<size_t>(l)].size();
  }
  return out;
}

}  // namespace

CholeskyFactor cholesky_effective_basis(const ChannelUplink& h, const std::vector<Vec>& c,
                                        const PowerAllocation& p) {
  const int num_users = h.num_users();
  for (Eigen::Index l = 0; l < p.diagonal.size(); ++l) {
    if (!(p.diagonal(l) > 0.0)) {
      throw error(errc::nonpositive_power, "effective basis requires all powers > 0");
    }
  }
  const Mat beamformer = assemble_beamformer(h, c);
  const Mat hc = h.entries * beamformer;
  Mat gram = hc.transpose() * hc;
  gram.diagonal() += p.diagonal.cwiseInverse();

  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  const Vec& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() / ev.minCoeff() > 1e14) {
    throw error(errc::numerically_singular_gram, "gram matrix condition number beyond 1e14");
  }

  // S S^T = gram^{-1}; the RQ-style step extracts a lower-triangular factor.
  const Mat s = eig.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal();
  Eigen::HouseholderQR<Mat> qr(s.transpose());
  Mat r = qr.matrixQR().topRows(num_users).triangularView<Eigen::Upper>();
  Mat f = r.transpose();
  for (int j = 0; j < num_users; ++j) {
    if (f(j, j) < 0.0) f.col(j) = -f.col(j);
  }
  return CholeskyFactor{std::move(f)};
}

IntMat lll_reduce(const CholeskyFactor& f, double delta) {
  if (!(delta > 0.25 && delta < 1.0)) {
    throw error(errc::invalid_delta, "LLL delta must lie in (0.25, 1)");
  }
  const Eigen::Index n = f.f.rows();
  Mat basis = f.f;  // rows are the current lattice basis vectors a_m^T F
  IntMat coeff = IntMat::Identity(n, n);

  Mat mu = Mat::Zero(n, n);
  Vec star_sq = Vec::Zero(n);
  Mat star = Mat::Zero(n, n);
  auto recompute_gso = [&]() {
    for (Eigen::Index i = 0; i < n; ++i) {
      Vec v = basis.row(i);
      for (Eigen::Index j = 0; j < i; ++j) {
        mu(i, j) = basis.row(i).dot(star.row(j)) / star_sq(j);
        v -= mu(i, j) * star.row(j).transpose();
      }
      star.row(i) = v;
      star_sq(i) = v.squaredNorm();
    }
  };
  recompute_gso();

  auto size_reduce = [&](Eigen::Index k, Eigen::Index j) {
    const std::int64_t q = round_ties_to_zero(mu(k, j));
    if (q == 0) return;
    basis.row(k) -= static_cast<double>(q) * basis.row(j);
    coeff.row(k) -= q * coeff.row(j);
    for (Eigen::Index i = 0; i <= j; ++i) mu(k, i) -= static_cast<double>(q) * mu(j, i);
  };

  // Schnorr-Euchner deep insertions: a failing row moves up to the first
  // position where it shortens the projected basis, not just one slot.
  auto insert_row = [&](Eigen::Index from, Eigen::Index to) {
    const Vec row = basis.row(from);
    const IntMat::RowXpr::PlainObject crow = coeff.row(from);
    for (Eigen::Index i = from; i > to; --i) {
      basis.row(i) = basis.row(i - 1);
      coeff.row(i) = coeff.row(i - 1);
    }
    basis.row(to) = row;
    coeff.row(to) = crow;
  };

  Eigen::Index k = 1;
  while (k < n) {
    for (Eigen::Index j = k - 1; j >= 0; --j) size_reduce(k, j);
    double c = basis.row(k).squaredNorm();
    Eigen::Index target = 0;
    while (target < k && c >= delta * star_sq(target)) {
      c -= mu(k, target) * mu(k, target) * star_sq(target);
      ++target;
    }
    if (target < k) {
      insert_row(k, target);
      recompute_gso();
      k = std::max<Eigen::Index>(target, 1);
    } else {
      ++k;
    }
  }

  // Rows sorted by the norm of their lattice vector; a permutation keeps |det| = 1.
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return basis.row(i).squaredNorm() < basis.row(j).squaredNorm();
  });
  IntMat sorted(n, n);
  for (Eigen::Index i = 0; i < n; ++i) sorted.row(i) = coeff.row(order[static_cast<size_t>(i)]);

  const __int128 det = int_det(sorted);
  if (det != 1 && det != -1) {
    throw std::logic_error("LLL bookkeeping lost unimodularity");
  }
  return sorted;
}

std::pair<IntMat, Vec> select_integer_matrix(const ChannelUplink& h, const std::vector<Vec>& c,
                                             const PowerAllocation& p, double delta) {
  const CholeskyFactor f = cholesky_effective_basis(h, c, p);
  const IntMat a = lll_reduce(f, delta);
  Vec sigma_sq(a.rows());
  for (Eigen::Index m = 0; m < a.rows(); ++m) {
    sigma_sq(m) = (a.row(m).cast<double>() * f.f).squaredNorm();
  }
  return {a, sigma_sq};
}

}  // namespace ifd
