#include "ifd/finite_field.hpp"

#include <algorithm>

#include "ifd/rng.hpp"

namespace ifd {

namespace {

std::int64_t mod_p(std::int64_t value, std::int64_t p) {
  const std::int64_t r = value % p;
  return r < 0 ? r + p : r;
}

std::int64_t mod_p128(__int128 value, std::int64_t p) {
  const std::int64_t r = static_cast<std::int64_t>(value % p);
  return r < 0 ? r + p : r;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

FieldMatrix reduce_mod_p(const IntMat& a, std::int64_t p) {
  FieldMatrix q{IntMat(a.rows(), a.cols()), p};
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) q.entries(i, j) = mod_p(a(i, j), p);
  return q;
}

std::int64_t mod_inverse(std::int64_t value, std::int64_t p) {
  std::int64_t a = mod_p(value, p);
  if (a == 0) throw error(errc::singular_mod_p, "zero has no modular inverse");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw error(errc::singular_mod_p, "value shares a factor with p");
  return mod_p(t, p);
}

std::int64_t choose_prime(const IntMat& a, std::int64_t floor) {
  if (!int_full_rank(a)) {
    throw error(errc::rank_deficient_integer_matrix, "prime selection needs a full-rank matrix");
  }
  const std::vector<__int128> minors = leading_minors(a);
  constexpr std::int64_t kCap = 1000000;
  for (std::int64_t p = std::max<std::int64_t>(2, floor); p <= kCap; ++p) {
    if (!is_prime(p)) continue;
    bool ok = true;
    for (const __int128 m : minors) {
      if (mod_p128(m, p) == 0) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
  throw error(errc::prime_search_exhausted, "no admissible prime below 1e6");
}

FieldMatrix invert_mod_p(const FieldMatrix& q) {
  const Eigen::Index n = q.entries.rows();
  const std::int64_t p = q.p;
  IntMat work = q.entries;
  IntMat inv = IntMat::Identity(n, n);

  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = -1;
    for (Eigen::Index row = col; row < n; ++row) {
      if (work(row, col) % p != 0) {
        piv = row;
        break;
      }
    }
    if (piv < 0) throw error(errc::singular_mod_p, "matrix is singular over Z_p");
    if (piv != col) {
      work.row(col).swap(work.row(piv));
      inv.row(col).swap(inv.row(piv));
    }
    const std::int64_t scale = mod_inverse(work(col, col), p);
    for (Eigen::Index j = 0; j < n; ++j) {
      work(col, j) = mod_p(work(col, j) * scale, p);
      inv(col, j) = mod_p(inv(col, j) * scale, p);
    }
    for (Eigen::Index row = 0; row < n; ++row) {
      if (row == col) continue;
      const std::int64_t factor = work(row, col);
      if (factor == 0) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        work(row, j) = mod_p(work(row, j) - factor * work(col, j), p);
        inv(row, j) = mod_p(inv(row, j) - factor * inv(col, j), p);
      }
    }
  }
  return FieldMatrix{std::move(inv), p};
}

std::pair<FieldMatrix, FieldMatrix> triangularize_over_zp(const IntMat& a, std::int64_t p) {
  const Eigen::Index n = a.rows();
  IntMat a_bar = reduce_mod_p(a, p).entries;
  IntMat l_bar = IntMat::Identity(n, n);

  // Unit-row eliminations only: pivots must already sit on the diagonal, which
  // is exactly the nonzero-leading-minor condition.
  for (Eigen::Index col = 0; col < n; ++col) {
    if (a_bar(col, col) == 0) {
      throw error(errc::zero_leading_minor, "leading principal minor vanishes mod p");
    }
    const std::int64_t pivot_inv = mod_inverse(a_bar(col, col), p);
    for (Eigen::Index row = col + 1; row < n; ++row) {
      const std::int64_t factor = mod_p(-a_bar(row, col) * pivot_inv, p);
      if (factor == 0) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        a_bar(row, j) = mod_p(a_bar(row, j) + factor * a_bar(col, j), p);
        l_bar(row, j) = mod_p(l_bar(row, j) + factor * l_bar(col, j), p);
      }
    }
  }
  return {FieldMatrix{std::move(l_bar), p}, FieldMatrix{std::move(a_bar), p}};
}

void LevelPlan::validate() const {
  if (k_c.size() != k_f.size()) {
    throw error(errc::dimension_mismatch, "level plan user counts disagree");
  }
  int prev_dc = 0;
  for (size_t l = 0; l < k_c.size(); ++l) {
    if (k_c[l] < 0 || k_c[l] > k_f[l] || k_f[l] > k) {
      throw error(errc::dimension_mismatch, "level plan bands out of range");
    }
    if (k_c[l] < prev_dc) {
      throw error(errc::dimension_mismatch, "don't-care depths must be nondecreasing");
    }
    prev_dc = k_c[l];
  }
}

void MessageSet::validate() const {
  plan.validate();
  if (symbols.size() != plan.k_c.size()) {
    throw error(errc::dimension_mismatch, "message count != plan user count");
  }
  for (int l = 0; l < plan.num_users(); ++l) {
    if (static_cast<int>(symbols[static_cast<size_t>(l)].size()) != plan.info_length(l)) {
      throw error(errc::dimension_mismatch, "message length != information band");
    }
    for (const std::int64_t s : symbols[static_cast<size_t>(l)]) {
      if (s < 0 || s >= p) throw error(errc::dimension_mismatch, "symbol outside [0, p)");
    }
  }
}

MessageSet random_message_set(const LevelPlan& plan, std::int64_t p, std::uint64_t seed) {
  MessageSet w;
  w.plan = plan;
  w.p = p;
  CounterRng rng(seed, 0);
  for (int l = 0; l < plan.num_users(); ++l) {
    std::vector<std::int64_t> msg(static_cast<size_t>(plan.info_length(l)));
    for (auto& s : msg) s = static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(p));
    w.symbols.push_back(std::move(msg));
  }
  return w;
}

namespace {

// Zero-padded column form of the messages, one length-k vector per user.
std::vector<std::vector<std::int64_t>> zero_padded(const MessageSet& w) {
  const int n = w.plan.num_users();
  std::vector<std::vector<std::int64_t>> padded(
      static_cast<size_t>(n), std::vector<std::int64_t>(static_cast<size_t>(w.plan.k), 0));
  for (int l = 0; l < n; ++l) {
    const int dc = w.plan.k_c[static_cast<size_t>(l)];
    for (int i = 0; i < w.plan.info_length(l); ++i) {
      padded[static_cast<size_t>(l)][static_cast<size_t>(dc + i)] =
          w.symbols[static_cast<size_t>(l)][static_cast<size_t>(i)];
    }
  }
  return padded;
}

}  // namespace

PrecodeResult downlink_precode(const MessageSet& w, const FieldMatrix& q_d, std::uint64_t e_seed) {
  w.validate();
  const int n = w.plan.num_users();
  const int k = w.plan.k;
  const std::int64_t p = q_d.p;
  if (q_d.entries.rows() != n) {
    throw error(errc::dimension_mismatch, "integer matrix size != plan user count");
  }
  if (w.p != q_d.p) {
    throw error(errc::dimension_mismatch, "message field and matrix field disagree");
  }

  const auto padded = zero_padded(w);

  // Interference on each user's don't-care levels: seeded, observed-not-chosen.
  PrecodeResult out;
  out.e.assign(static_cast<size_t>(n), std::vector<std::int64_t>(static_cast<size_t>(k), 0));
  for (int l = 0; l < n; ++l) {
    CounterRng rng(e_seed, static_cast<std::uint64_t>(l));
    for (int i = 0; i < w.plan.k_c[static_cast<size_t>(l)]; ++i) {
      out.e[static_cast<size_t>(l)][static_cast<size_t>(i)] =
          static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(p));
    }
  }
  out.v.assign(static_cast<size_t>(n), std::vector<std::int64_t>(static_cast<size_t>(k), 0));

  // Inverses of the leading principal submatrices, stage m using the top-left m x m.
  std::vector<IntMat> stage_inverse(static_cast<size_t>(n));
  for (int m = 1; m <= n; ++m) {
    stage_inverse[static_cast<size_t>(m - 1)] =
        invert_mod_p(FieldMatrix{q_d.entries.topLeftCorner(m, m), p}).entries;
  }

  auto solve_levels = [&](int active, int level_begin, int level_end) {
    const IntMat& inv = stage_inverse[static_cast<size_t>(active - 1)];
    for (int i = level_begin; i < level_end; ++i) {
      std::vector<std::int64_t> rhs(static_cast<size_t>(active));
      for (int j = 0; j < active; ++j) {
        std::int64_t acc = padded[static_cast<size_t>(j)][static_cast<size_t>(i)];
        for (int l = active; l < n; ++l) {
          acc = mod_p(acc + q_d.entries(j, l) * out.e[static_cast<size_t>(l)][static_cast<size_t>(i)], p);
        }
        rhs[static_cast<size_t>(j)] = acc;
      }
      for (int j = 0; j < active; ++j) {
        std::int64_t acc = 0;
        for (int l = 0; l < active; ++l) {
          acc = mod_p(acc + inv(j, l) * rhs[static_cast<size_t>(l)], p);
        }
        out.v[static_cast<size_t>(j)][static_cast<size_t>(i)] = acc;
      }
    }
  };

  // Shared bottom levels take the full inverse; each stage upward drops the
  // lowest-power remaining user and pre-subtracts its interference.
  solve_levels(n, w.plan.k_c[static_cast<size_t>(n - 1)], k);
  for (int m = n - 1; m >= 1; --m) {
    solve_levels(m, w.plan.k_c[static_cast<size_t>(m - 1)], w.plan.k_c[static_cast<size_t>(m)]);
  }
  return out;
}

MessageSet downlink_decode_verify(const PrecodeResult& precoded, const FieldMatrix& q_d,
                                  const MessageSet& original) {
  original.validate();
  const int n = original.plan.num_users();
  const int k = original.plan.k;
  const std::int64_t p = q_d.p;

  MessageSet recovered;
  recovered.plan = original.plan;
  recovered.p = original.p;
  for (int m = 0; m < n; ++m) {
    std::vector<std::int64_t> u(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
      std::int64_t acc = 0;
      for (int l = 0; l < n; ++l) {
        const std::int64_t diff = mod_p(precoded.v[static_cast<size_t>(l)][static_cast<size_t>(i)] -
                                            precoded.e[static_cast<size_t>(l)][static_cast<size_t>(i)],
                                        p);
        acc = mod_p(acc + q_d.entries(m, l) * diff, p);
      }
      u[static_cast<size_t>(i)] = acc;
    }
    const int dc = original.plan.k_c[static_cast<size_t>(m)];
    const int info = original.plan.info_length(m);
    std::vector<std::int64_t> msg(u.begin() + dc, u.begin() + dc + info);
    if (msg != original.symbols[static_cast<size_t>(m)]) {
      throw error(errc::verification_failed, "decoded message differs from the original");
    }
    for (int i = dc + info; i < k; ++i) {
      if (u[static_cast<size_t>(i)] != 0) {
        throw error(errc::verification_failed, "zero-padding levels decoded nonzero");
      }
    }
    recovered.symbols.push_back(std::move(msg));
  }
  return recovered;
}

MessageSet uplink_sic_solve(const std::vector<std::vector<std::int64_t>>& u,
                            const FieldMatrix& q_u, const LevelPlan& plan) {
  plan.validate();
  const int n = plan.num_users();
  const int k = plan.k;
  const std::int64_t p = q_u.p;
  const IntMat inv = invert_mod_p(q_u).entries;

  MessageSet out;
  out.plan = plan;
  out.p = p;
  out.symbols.assign(static_cast<size_t>(n), {});
  for (int l = 0; l < n; ++l) {
    std::vector<std::int64_t> solved(static_cast<size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
      std::int64_t acc = 0;
      for (int m = 0; m < n; ++m) {
        acc = mod_p(acc + inv(l, m) * u[static_cast<size_t>(m)][static_cast<size_t>(i)], p);
      }
      solved[static_cast<size_t>(i)] = acc;
    }
    const int dc = plan.k_c[static_cast<size_t>(l)];
    out.symbols[static_cast<size_t>(l)].assign(solved.begin() + dc,
                                               solved.begin() + dc + plan.info_length(l));
  }
  return out;
}

}  // namespace ifd
