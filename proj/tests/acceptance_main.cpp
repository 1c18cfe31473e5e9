// Acceptance suite: every release-gating check with its tolerance pinned in
// code. Prints one PASS/FAIL line per criterion; exit status is nonzero if
// any criterion fails.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ifd/baselines.hpp"
#include "ifd/duality.hpp"
#include "ifd/finite_field.hpp"
#include "ifd/harness.hpp"
#include "ifd/lattice.hpp"
#include "ifd/optimizer.hpp"
#include "ifd/rates.hpp"
#include "ifd/rng.hpp"
#include "oracles.hpp"

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct FigureTarget {
  double capacity, capacity_tol;
  double if_sum, if_tol;
  double zf_sum, zf_tol;
};

bool check_figure(int criterion, int n, int l, double p_db, int trials,
                  const FigureTarget& target) {
  ifd::SweepSpec spec;
  spec.n = n;
  spec.l = l;
  spec.p_db_grid = {p_db};
  spec.trials = trials;
  spec.seed = 20240901;
  const ifd::SweepResult result = ifd::run_sweep(spec);

  const double cap = result.cells[0][0].mean;
  const double ifr = result.cells[0][1].mean;
  const double zfr = result.cells[0][2].mean;
  int degenerate = 0;
  for (const auto& stats : result.cells[0]) degenerate += stats.degenerate;

  const bool pass = std::abs(cap - target.capacity) <= target.capacity_tol &&
                    std::abs(ifr - target.if_sum) <= target.if_tol &&
                    std::abs(zfr - target.zf_sum) <= target.zf_tol &&
                    degenerate * 100 < trials;
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer),
                "N=%d L=%d %gdB: capacity %.4f (ref %.3f+-%.2f), IF %.4f (ref %.3f+-%.2f), "
                "ZF %.4f (ref %.3f+-%.2f), degenerate %d",
                n, l, p_db, cap, target.capacity, target.capacity_tol, ifr, target.if_sum,
                target.if_tol, zfr, target.zf_sum, target.zf_tol, degenerate);
  report(criterion, pass, buffer);
  return pass;
}

void criterion_5_duality_exactness() {
  ifd::CounterRng rng(1005, 0);
  double worst_beta = 0.0, worst_power = 0.0, worst_involution = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int l = 2 + static_cast<int>(rng.next_u64() % 4);  // L <= 5
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    ifd::ChannelUplink h = oracle::random_uplink_channel(n, l, rng);
    ifd::UplinkConfig cfg = ifd::default_uplink_init(h, 1.0);
    for (int i = 0; i < l; ++i) cfg.p.diagonal(i) = 0.3 + 2.0 * rng.next_unit();
    cfg.p.budget = cfg.consumed_power();
    cfg.a = oracle::random_full_rank_int(l, 2, rng);
    if (trial % 2 == 0) {
      cfg.b = ifd::optimal_uplink_equalizer(cfg.channel, cfg.c, cfg.p, cfg.a);
    } else {
      cfg.b = 0.25 * oracle::random_matrix(l, n, rng);
      cfg.b.col(0).array() += 0.2;
    }

    const ifd::Vec beta = cfg.p.diagonal.cwiseQuotient(ifd::uplink_effective_noise(cfg));
    const ifd::DownlinkConfig dual = ifd::dual_transform(cfg, beta);
    const ifd::Vec beta_down =
        dual.p.diagonal.cwiseQuotient(ifd::downlink_effective_noise(dual));
    const ifd::UplinkConfig back = ifd::dual_transform(dual, beta_down);

    worst_beta =
        std::max(worst_beta, (beta_down - beta).cwiseQuotient(beta).cwiseAbs().maxCoeff());
    worst_power = std::max(worst_power, std::abs(dual.consumed_power() - cfg.consumed_power()) /
                                            cfg.consumed_power());
    worst_involution =
        std::max(worst_involution, ((back.p.diagonal - cfg.p.diagonal).cwiseAbs().cwiseQuotient(
                                        cfg.p.diagonal.cwiseAbs()))
                                       .maxCoeff());
  }
  char buffer[200];
  std::snprintf(buffer, sizeof(buffer),
                "500 configs L<=5: max SINR dev %.2e (<=1e-9), max power dev %.2e (<=1e-9), "
                "max involution dev %.2e (<=1e-8)",
                worst_beta, worst_power, worst_involution);
  report(5, worst_beta <= 1e-9 && worst_power <= 1e-9 && worst_involution <= 1e-8, buffer);
}

void criterion_6_monotonicity() {
  ifd::CounterRng rng(1006, 0);
  int converged = 0;
  int monotone_violations = 0;
  const int total = 200;
  for (int trial = 0; trial < total; ++trial) {
    const int l = 2 + static_cast<int>(rng.next_u64() % 3);
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    const ifd::ChannelUplink h = oracle::random_uplink_channel(n, l, rng);
    const double p_total = std::pow(10.0, 1.0 + rng.next_unit());  // 10 to 20 dB
    const ifd::UplinkConfig init = ifd::default_uplink_init(h, p_total);
    auto [a, sigma] = ifd::select_integer_matrix(h, init.c, init.p);
    const ifd::OptimizerReport report_t = ifd::iterate_uplink(h, p_total, a, init);
    if (report_t.converged) ++converged;
    for (size_t i = 1; i < report_t.sum_rate_trace.size(); ++i) {
      if (report_t.sum_rate_trace[i] < report_t.sum_rate_trace[i - 1] - 1e-9) {
        ++monotone_violations;
      }
    }
  }
  char buffer[200];
  std::snprintf(buffer, sizeof(buffer),
                "200 channels: monotone violations %d (=0), converged %d/200 (>=198)",
                monotone_violations, converged);
  report(6, monotone_violations == 0 && converged * 100 >= total * 99, buffer);
}

void criterion_7_constant_gap() {
  ifd::CounterRng rng(1007, 0);
  int failures = 0;
  double worst_margin = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const int l = 2 + trial % 3;
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    const double p_db = 10.0 * (trial % 3);
    ifd::ChannelDownlink h;
    for (int m = 0; m < l; ++m) h.blocks.push_back(oracle::random_matrix(1, n, rng));
    const ifd::ConstantGapResult result =
        ifd::constant_gap_check(h, std::pow(10.0, p_db / 10.0));
    if (!result.gap_bound_ok) ++failures;
    const double margin = result.if_sum -
                          (result.capacity - 0.5 * l * std::log2(static_cast<double>(l)) - 1e-6);
    worst_margin = std::min(worst_margin, margin);
  }
  char buffer[200];
  std::snprintf(buffer, sizeof(buffer),
                "100 downlink channels, L in {2,3,4}, P in {0,10,20} dB: %d bound violations, "
                "worst margin %.3f bits",
                failures, worst_margin);
  report(7, failures == 0, buffer);
}

void criterion_8_remark3() {
  ifd::CounterRng rng(1008, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int l = 2 + static_cast<int>(rng.next_u64() % 3);
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    ifd::ChannelUplink h = oracle::random_uplink_channel(n, l, rng);
    ifd::UplinkConfig cfg = ifd::default_uplink_init(h, 1.0);
    for (int i = 0; i < l; ++i) cfg.p.diagonal(i) = 0.2 + 3.0 * rng.next_unit();
    cfg.p.budget = cfg.consumed_power();
    cfg.a = ifd::IntMat::Identity(l, l);
    cfg.b = ifd::optimal_uplink_equalizer(cfg.channel, cfg.c, cfg.p, cfg.a);
    const ifd::Vec sigma = ifd::uplink_effective_noise(cfg);

    const ifd::Mat gain = cfg.channel.entries * cfg.beamforming_matrix();
    for (int m = 0; m < l; ++m) {
      ifd::Mat cov = ifd::Mat::Identity(n, n);
      for (int j = 0; j < l; ++j) {
        if (j != m) cov += cfg.p.diagonal(j) * gain.col(j) * gain.col(j).transpose();
      }
      const double sinr = cfg.p.diagonal(m) * gain.col(m).dot(cov.inverse() * gain.col(m));
      const double via_if = 0.5 * std::log2(cfg.p.diagonal(m) / sigma(m));
      const double via_mmse = 0.5 * std::log2(1.0 + sinr);
      worst = std::max(worst, std::abs(via_if - via_mmse) / std::abs(via_mmse));
    }
  }
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer),
                "200 instances, A = I with optimal equalizers: max relative rate deviation "
                "%.2e (<=1e-9)",
                worst);
  report(8, worst <= 1e-9, buffer);
}

void criterion_9_lll() {
  ifd::CounterRng rng(1009, 0);
  int instances = 0;
  bool all_unimodular = true;
  bool all_within_bound = true;
  for (int trial = 0; trial < 45; ++trial) {
    const int l = 2 + trial % 3;  // L in {2,3,4}
    const ifd::ChannelUplink h = oracle::random_uplink_channel(l, l, rng);
    ifd::PowerAllocation p{ifd::Vec::Ones(l), static_cast<double>(l)};
    std::vector<ifd::Vec> beams(static_cast<size_t>(l), ifd::Vec::Ones(1));
    const ifd::CholeskyFactor f = ifd::cholesky_effective_basis(h, beams, p);
    const ifd::IntMat a = ifd::lll_reduce(f);
    const __int128 det = ifd::int_det(a);
    if (det != 1 && det != -1) all_unimodular = false;

    const auto minima = oracle::successive_minima_sq(f.f, 15);
    const double factor_sq = std::pow(2.0, l - 1);  // (2^{(L-1)/2})^2 on squared norms
    for (int m = 0; m < l; ++m) {
      const double norm_sq = (a.row(m).cast<double>() * f.f).squaredNorm();
      if (norm_sq > factor_sq * minima[static_cast<size_t>(m)] * (1.0 + 1e-9)) {
        all_within_bound = false;
      }
    }
    ++instances;
  }
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer),
                "%d instances L in {2,3,4}: unimodular %s, norms within 2^{(L-1)/2} of "
                "exhaustive minima (radius 15) %s",
                instances, all_unimodular ? "all" : "VIOLATED",
                all_within_bound ? "all" : "VIOLATED");
  report(9, all_unimodular && all_within_bound, buffer);
}

void criterion_10_finite_field() {
  using ifd::IntMat;
  bool ok = true;
  std::string detail;

  // Worked uplink example: the alternative decoding order over Z_3.
  IntMat a(2, 2);
  a << 2, 1, 0, 1;
  IntMat column_swapped(2, 2);
  column_swapped << 1, 2, 1, 0;
  auto [l2, a2_swapped] = ifd::triangularize_over_zp(column_swapped, 3);
  IntMat expected_l2(2, 2);
  expected_l2 << 1, 0, 2, 1;
  IntMat a2(2, 2);
  a2 << a2_swapped.entries(0, 1), a2_swapped.entries(0, 0), a2_swapped.entries(1, 1),
      a2_swapped.entries(1, 0);
  IntMat expected_a2(2, 2);
  expected_a2 << 2, 1, 1, 0;
  if (l2.entries != expected_l2 || a2 != expected_a2) {
    ok = false;
    detail += "example-1 matrices mismatch; ";
  }

  // Worked downlink example: identity permutation of A_2 is rejected.
  IntMat a_rejected(2, 2);
  a_rejected << 0, 1, 2, 1;
  if (ifd::leading_minors_nonzero(a_rejected)) {
    ok = false;
    detail += "A_2 identity permutation wrongly accepted; ";
  }
  bool threw = false;
  try {
    ifd::triangularize_over_zp(a_rejected, 3);
  } catch (const ifd::error&) {
    threw = true;
  }
  if (!threw) {
    ok = false;
    detail += "A_2 triangularization did not fail; ";
  }

  // Randomized precode/decode round trips, exact recovery.
  ifd::CounterRng rng(1010, 0);
  const std::vector<std::int64_t> primes = {3, 5, 7, 11};
  int done = 0;
  int failures = 0;
  while (done < 1000) {
    const int l = 1 + static_cast<int>(rng.next_u64() % 4);
    const std::int64_t p = primes[rng.next_u64() % primes.size()];
    IntMat cand(l, l);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) cand(i, j) = static_cast<std::int64_t>(rng.next_u64() % 7) - 3;
    bool minors_ok = ifd::leading_minors_nonzero(cand);
    if (minors_ok) {
      for (const __int128 m : ifd::leading_minors(cand)) {
        if (static_cast<std::int64_t>(m % p) == 0) minors_ok = false;
      }
    }
    if (!minors_ok) continue;

    ifd::LevelPlan plan;
    plan.k = 2 + static_cast<int>(rng.next_u64() % 8);
    int dc = 0;
    for (int u = 0; u < l; ++u) {
      dc = std::min<int>(plan.k, dc + static_cast<int>(rng.next_u64() % 2));
      plan.k_c.push_back(dc);
      plan.k_f.push_back(plan.k);
    }
    const ifd::MessageSet w = ifd::random_message_set(plan, p, rng.next_u64());
    const ifd::FieldMatrix q = ifd::reduce_mod_p(cand, p);
    try {
      const ifd::PrecodeResult out = ifd::downlink_precode(w, q, rng.next_u64());
      const ifd::MessageSet recovered = ifd::downlink_decode_verify(out, q, w);
      if (recovered.symbols != w.symbols) ++failures;
    } catch (const ifd::error&) {
      ++failures;
    }
    ++done;
  }
  if (failures > 0) {
    ok = false;
    detail += std::to_string(failures) + " round-trip failures; ";
  }
  if (detail.empty()) {
    detail = "example traces match; 1000 randomized precode/decode round trips exact";
  }
  report(10, ok, detail);
}

void criterion_11_reproducibility() {
  ifd::SweepSpec spec;
  spec.n = 2;
  spec.l = 4;
  spec.p_db_grid = {0.0, 10.0, 20.0};
  spec.trials = 60;
  spec.seed = 424242;

  spec.threads = 1;
  const std::string serial = ifd::csv_string(ifd::run_sweep(spec));
  spec.threads = 8;
  const std::string parallel = ifd::csv_string(ifd::run_sweep(spec));
  const bool pass = serial == parallel;
  report(11, pass,
         pass ? "CSV byte-identical at parallelism 1 and 8"
              : "CSV differs between parallelism 1 and 8");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");

  check_figure(1, 2, 4, 20.0, 10000, {6.506, 0.08, 5.944, 0.15, 2.638, 0.10});
  check_figure(2, 4, 4, 20.0, 10000, {10.651, 0.10, 10.388, 0.15, 8.010, 0.12});
  check_figure(3, 4, 2, 10.0, 10000, {3.8715, 0.05, 3.8360, 0.08, 3.6640, 0.06});
  check_figure(4, 6, 6, 20.0, 5000, {16.066, 0.20, 15.383, 0.25, 11.541, 0.25});
  criterion_5_duality_exactness();
  criterion_6_monotonicity();
  criterion_7_constant_gap();
  criterion_8_remark3();
  criterion_9_lll();
  criterion_10_finite_field();
  criterion_11_reproducibility();

  std::printf("================\n%s (%d failing)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
