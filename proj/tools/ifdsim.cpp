// Command-line driver: Monte Carlo sweeps over fading ensembles, duality
// residual checks, and worked finite-field traces.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ifd/baselines.hpp"
#include "ifd/duality.hpp"
#include "ifd/finite_field.hpp"
#include "ifd/harness.hpp"
#include "ifd/lattice.hpp"
#include "ifd/rates.hpp"
#include "ifd/rng.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::vector<ifd::Method> parse_methods(const std::string& spec) {
  std::vector<ifd::Method> methods;
  std::stringstream stream(spec);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token == "capacity") {
      methods.push_back(ifd::Method::capacity);
    } else if (token == "if" || token == "integer_forcing") {
      methods.push_back(ifd::Method::integer_forcing);
    } else if (token == "zf" || token == "zero_forcing") {
      methods.push_back(ifd::Method::zero_forcing);
    } else {
      throw CLI::ValidationError("--methods", "unknown method: " + token);
    }
  }
  if (methods.empty()) throw CLI::ValidationError("--methods", "no methods selected");
  return methods;
}

void print_field_matrix(const char* name, const ifd::FieldMatrix& m) {
  std::printf("%s (mod %lld):\n", name, static_cast<long long>(m.p));
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    std::printf("  [");
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
      std::printf(" %lld", static_cast<long long>(m.entries(i, j)));
    }
    std::printf(" ]\n");
  }
}

int run_ffdemo(int example) {
  using ifd::FieldMatrix;
  using ifd::IntMat;

  if (example == 1) {
    // Uplink algebraic successive cancellation over Z_3.
    IntMat a(2, 2);
    a << 2, 1, 0, 1;
    const std::int64_t p = ifd::choose_prime(a, 3);
    std::printf("Uplink algebraic SIC demo, A = [[2,1],[0,1]], p = %lld\n\n",
                static_cast<long long>(p));

    auto [l1, a1] = ifd::triangularize_over_zp(a, p);
    print_field_matrix("L_bar_1", l1);
    print_field_matrix("A_bar_1 = [L_bar_1 A]", a1);
    std::printf("A_bar_1 is upper triangular: decoding order 1 -> 2 (identity pairing).\n\n");

    // The opposite decoding order: triangularize the column-swapped matrix and
    // present L_bar applied to the original A.
    IntMat swapped(2, 2);
    swapped << a(0, 1), a(0, 0), a(1, 1), a(1, 0);
    auto [l2, a2_swapped] = ifd::triangularize_over_zp(swapped, p);
    IntMat a2(2, 2);
    a2 << a2_swapped.entries(0, 1), a2_swapped.entries(0, 0), a2_swapped.entries(1, 1),
        a2_swapped.entries(1, 0);
    print_field_matrix("L_bar_2", l2);
    print_field_matrix("A_bar_2 = [L_bar_2 A]", FieldMatrix{a2, p});
    std::printf("A_bar_2 is upper triangular after swapping its columns:\n");
    std::printf("decoding order 2 -> 1 pairs user 1 with the larger noise variance.\n\n");

    IntMat only_identity(2, 2);
    only_identity << 1, 0, 1, 1;
    std::printf("A = [[1,0],[1,1]] admits only the identity ordering:\n");
    std::printf("  identity leading minors nonzero: %s\n",
                ifd::leading_minors_nonzero(only_identity) ? "yes" : "no");
    IntMat only_identity_swapped(2, 2);
    only_identity_swapped << 0, 1, 1, 1;
    std::printf("  swapped-column leading minors nonzero: %s\n",
                ifd::leading_minors_nonzero(only_identity_swapped) ? "yes" : "no");

    // Symbol-level round trip for the linear-combination solve.
    ifd::LevelPlan plan{{0, 0}, {2, 2}, 2};
    ifd::MessageSet w = ifd::random_message_set(plan, p, 7);
    const FieldMatrix q = ifd::reduce_mod_p(a, p);
    std::vector<std::vector<std::int64_t>> u(2, std::vector<std::int64_t>(2, 0));
    for (int m = 0; m < 2; ++m)
      for (int i = 0; i < 2; ++i)
        for (int l = 0; l < 2; ++l)
          u[m][i] = (u[m][i] + q.entries(m, l) * w.symbols[l][i]) % p;
    const ifd::MessageSet solved = ifd::uplink_sic_solve(u, q, plan);
    std::printf("\nround trip u = Q w, w_hat = Q^{-1} u: messages %s\n",
                solved.symbols == w.symbols ? "recovered exactly" : "MISMATCH");
    return kExitOk;
  }

  if (example == 2) {
    // Downlink pre-inversion admissibility over Z_3, P_1 > P_2.
    const std::int64_t p = 3;
    IntMat a1(2, 2), a2(2, 2), a3(2, 2);
    a1 << 2, 1, 0, 1;
    a2 << 0, 1, 2, 1;
    a3 << 2, 1, 1, 1;
    std::printf("Downlink pre-inversion demo over Z_%lld (P_1 > P_2)\n\n",
                static_cast<long long>(p));
    std::printf("A_1 = [[2,1],[0,1]]: identity permutation admissible: %s\n",
                ifd::leading_minors_nonzero(a1) ? "yes" : "no");
    std::printf("A_2 = [[0,1],[2,1]]: identity permutation admissible: %s (A_2[1:1] = 0)\n",
                ifd::leading_minors_nonzero(a2) ? "yes" : "no");
    std::printf("A_3 = [[2,1],[1,1]]: identity permutation admissible: %s\n",
                ifd::leading_minors_nonzero(a3) ? "yes" : "no");
    IntMat a3_swapped(2, 2);
    a3_swapped << a3(1, 1), a3(1, 0), a3(0, 1), a3(0, 0);
    std::printf("A_3 swapped rows+columns: admissible as well: %s\n\n",
                ifd::leading_minors_nonzero(a3_swapped) ? "yes" : "no");

    const FieldMatrix q1 = ifd::reduce_mod_p(a1, p);
    print_field_matrix("Q_1", q1);
    print_field_matrix("Q_1^{-1}", ifd::invert_mod_p(q1));

    // Staged precoding with a 3-level plan: user 2 cannot set its top level.
    ifd::LevelPlan plan{{0, 1}, {3, 3}, 3};
    ifd::MessageSet w = ifd::random_message_set(plan, p, 11);
    const ifd::PrecodeResult precoded = ifd::downlink_precode(w, q1, 13);
    std::printf("\nstaged precode across 3 levels (user-2 top level is interference):\n");
    for (int l = 0; l < 2; ++l) {
      std::printf("  v_%d =", l + 1);
      for (std::int64_t s : precoded.v[static_cast<size_t>(l)])
        std::printf(" %lld", static_cast<long long>(s));
      std::printf("   e_%d =", l + 1);
      for (std::int64_t s : precoded.e[static_cast<size_t>(l)])
        std::printf(" %lld", static_cast<long long>(s));
      std::printf("\n");
    }
    const ifd::MessageSet recovered = ifd::downlink_decode_verify(precoded, q1, w);
    std::printf("decode u_m = sum_l q_ml (v_l - e_l): messages %s\n",
                recovered.symbols == w.symbols ? "recovered exactly" : "MISMATCH");
    return kExitOk;
  }

  std::fprintf(stderr, "ffdemo: --example must be 1 or 2\n");
  return kExitValidation;
}

int run_duality_check(std::uint64_t seed, int l, int n, int count) {
  double worst_beta = 0.0;
  double worst_power = 0.0;
  double worst_involution = 0.0;
  for (int trial = 0; trial < count; ++trial) {
    const ifd::Mat h = ifd::generate_channel(seed, static_cast<std::uint64_t>(trial), n, l);
    ifd::ChannelUplink channel;
    channel.entries = h;
    channel.user_antennas.assign(static_cast<size_t>(l), 1);

    ifd::UplinkConfig cfg = ifd::default_uplink_init(channel, 10.0);
    ifd::CounterRng rng(seed ^ 0x5eedULL, static_cast<std::uint64_t>(trial));
    for (int i = 0; i < l; ++i) cfg.p.diagonal(i) = 0.5 + rng.next_unit() * 3.0;
    cfg.p.budget = cfg.consumed_power();
    auto [a, sigma] = ifd::select_integer_matrix(channel, cfg.c, cfg.p);
    cfg.a = a;
    cfg.b = ifd::optimal_uplink_equalizer(channel, cfg.c, cfg.p, cfg.a);

    const ifd::Vec beta = cfg.p.diagonal.cwiseQuotient(ifd::uplink_effective_noise(cfg));
    const ifd::DownlinkConfig down = ifd::dual_transform(cfg, beta);
    const ifd::Vec beta_down = down.p.diagonal.cwiseQuotient(ifd::downlink_effective_noise(down));
    const ifd::UplinkConfig back = ifd::dual_transform(down, beta_down);

    const double beta_resid = (beta_down - beta).cwiseQuotient(beta).cwiseAbs().maxCoeff();
    const double power_resid =
        std::abs(down.consumed_power() - cfg.consumed_power()) / cfg.consumed_power();
    const double involution_resid =
        (back.p.diagonal - cfg.p.diagonal).cwiseAbs().maxCoeff() / cfg.p.diagonal.maxCoeff();
    worst_beta = std::max(worst_beta, beta_resid);
    worst_power = std::max(worst_power, power_resid);
    worst_involution = std::max(worst_involution, involution_resid);
  }
  std::printf("duality residuals over %d random configs (L=%d, N=%d):\n", count, l, n);
  std::printf("  max relative SINR deviation:      %.3e\n", worst_beta);
  std::printf("  max relative power deviation:     %.3e\n", worst_power);
  std::printf("  max relative involution residual: %.3e\n", worst_involution);
  return (worst_beta < 1e-9 && worst_power < 1e-9 && worst_involution < 1e-8) ? kExitOk
                                                                              : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integer-forcing transceiver simulator"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sum-rate sweep over total power");
  int n = 2, l = 4, trials = 10000, max_iters = 500, threads = 0;
  double pmin = 0.0, pmax = 20.0, step = 1.0, tol = 1e-8, lll_delta = 0.75, capacity_tol = 1e-7;
  std::uint64_t seed = 0;
  std::string methods = "capacity,if,zf";
  std::string out_path = "sweep.csv";
  sweep->add_option("--n", n, "basestation antennas")->required();
  sweep->add_option("--l", l, "single-antenna users")->required();
  sweep->add_option("--pmin", pmin, "grid start, dB");
  sweep->add_option("--pmax", pmax, "grid end, dB");
  sweep->add_option("--step", step, "grid step, dB")->check(CLI::PositiveNumber);
  sweep->add_option("--trials", trials, "trials per grid point")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "RNG seed");
  sweep->add_option("--methods", methods, "comma list: capacity,if,zf");
  sweep->add_option("--out", out_path, "output CSV path");
  sweep->add_option("--tol", tol, "optimizer SINR tolerance");
  sweep->add_option("--max-iters", max_iters, "optimizer iteration cap");
  sweep->add_option("--delta", lll_delta, "LLL reduction parameter");
  sweep->add_option("--capacity-tol", capacity_tol, "capacity solver tolerance");
  sweep->add_option("--threads", threads, "worker threads (0 = hardware)");

  // antennas-sweep
  auto* ant = app.add_subcommand("antennas-sweep", "sum rate vs basestation antenna count");
  int nmin = 1, nmax = 12;
  double p_db = 20.0;
  ant->add_option("--l", l, "single-antenna users")->required();
  ant->add_option("--nmin", nmin, "smallest antenna count")->required();
  ant->add_option("--nmax", nmax, "largest antenna count")->required();
  ant->add_option("--p", p_db, "total power, dB");
  ant->add_option("--trials", trials, "trials per antenna count")->check(CLI::PositiveNumber);
  ant->add_option("--seed", seed, "RNG seed");
  ant->add_option("--methods", methods, "comma list: capacity,if,zf");
  ant->add_option("--out", out_path, "output CSV path");
  ant->add_option("--tol", tol, "optimizer SINR tolerance");
  ant->add_option("--max-iters", max_iters, "optimizer iteration cap");
  ant->add_option("--delta", lll_delta, "LLL reduction parameter");
  ant->add_option("--capacity-tol", capacity_tol, "capacity solver tolerance");
  ant->add_option("--threads", threads, "worker threads (0 = hardware)");

  // duality-check
  auto* dual = app.add_subcommand("duality-check", "print SINR/power conservation residuals");
  int count = 100;
  dual->add_option("--seed", seed, "RNG seed");
  dual->add_option("--l", l, "users")->required();
  dual->add_option("--n", n, "basestation antennas")->required();
  dual->add_option("--count", count, "number of random configs")->check(CLI::PositiveNumber);

  // ffdemo
  auto* ffdemo = app.add_subcommand("ffdemo", "worked finite-field traces");
  int example = 1;
  ffdemo->add_option("--example", example, "1 (uplink SIC) or 2 (downlink pre-inversion)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(sweep) || app.got_subcommand(ant)) {
      ifd::SweepSpec spec;
      spec.l = l;
      spec.trials = trials;
      spec.seed = seed;
      spec.methods = parse_methods(methods);
      spec.optimizer.tol = tol;
      spec.optimizer.max_iters = max_iters;
      spec.optimizer.lll_delta = lll_delta;
      spec.capacity_tol = capacity_tol;
      spec.threads = threads;

      if (app.got_subcommand(sweep)) {
        spec.n = n;
        for (double p = pmin; p <= pmax + 1e-12; p += step) spec.p_db_grid.push_back(p);
        const ifd::SweepResult result = ifd::run_sweep(spec);
        ifd::emit_csv(result, out_path);
        std::printf("wrote %s (%zu grid points x %zu methods, %d trials)\n", out_path.c_str(),
                    result.p_db.size(), result.methods.size(), trials);
        return kExitOk;
      }

      // Antenna mode: one single-point sweep per antenna count.
      if (nmin < 1 || nmax < nmin) {
        std::fprintf(stderr, "antennas-sweep: need 1 <= nmin <= nmax\n");
        return kExitValidation;
      }
      std::string csv = "n,method,mean_sum_rate,std_err,trials,degenerate\n";
      char buffer[160];
      for (int antennas = nmin; antennas <= nmax; ++antennas) {
        spec.n = antennas;
        spec.p_db_grid = {p_db};
        const ifd::SweepResult result = ifd::run_sweep(spec);
        for (size_t m = 0; m < result.methods.size(); ++m) {
          const ifd::MethodStats& stats = result.cells[0][m];
          std::snprintf(buffer, sizeof(buffer), "%d,%s,%.6g,%.6g,%d,%d\n", antennas,
                        ifd::method_name(result.methods[m]), stats.mean, stats.std_err,
                        stats.trials, stats.degenerate);
          csv += buffer;
        }
      }
      std::ofstream file(out_path, std::ios::binary);
      if (!file) {
        std::fprintf(stderr, "cannot open %s for writing\n", out_path.c_str());
        return kExitIo;
      }
      file << csv;
      std::printf("wrote %s (%d antenna counts, %d trials each)\n", out_path.c_str(),
                  nmax - nmin + 1, trials);
      return kExitOk;
    }

    if (app.got_subcommand(dual)) return run_duality_check(seed, l, n, count);
    if (app.got_subcommand(ffdemo)) return run_ffdemo(example);
  } catch (const ifd::error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return err.code() == ifd::errc::io_error ? kExitIo : kExitValidation;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitValidation;
  }
  return kExitOk;
}
