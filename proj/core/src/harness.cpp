#include "ifd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "ifd/baselines.hpp"
#include "ifd/lattice.hpp"
#include "ifd/rng.hpp"

namespace ifd {

const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::capacity: return "capacity";
    case Method::integer_forcing: return "integer_forcing";
    case Method::zero_forcing: return "zero_forcing";
  }
  return "unknown";
}

Mat generate_channel(std::uint64_t seed, std::uint64_t trial_index, int n, int m) {
  CounterRng rng(seed, trial_index);
  Mat h(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) h(i, j) = rng.next_normal();
  return h;
}

double pairwise_sum(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  std::vector<double> level = values;
  while (level.size() > 1) {
    std::vector<double> next;
    next.reserve((level.size() + 1) / 2);
    for (size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] + level[i + 1]);
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

double run_trial(Method method, const Mat& channel, double p_total, const OptimizerOptions& opts,
                 double capacity_tol) {
  ChannelUplink h;
  h.entries = channel;
  h.user_antennas.assign(static_cast<size_t>(channel.cols()), 1);

  switch (method) {
    case Method::capacity:
      return mac_sum_capacity(h, p_total, capacity_tol);
    case Method::zero_forcing:
      return zf_baseline(h, p_total, opts);
    case Method::integer_forcing: {
      const UplinkConfig init = default_uplink_init(h, p_total);
      auto [a, sigma_sq] = select_integer_matrix(h, init.c, init.p, opts.lll_delta);
      const OptimizerReport report = iterate_uplink(h, p_total, a, init, opts);
      if (report.abort_reason) {
        throw error(*report.abort_reason, "integer-forcing trial aborted");
      }
      return report.final_sum_rate();
    }
  }
  throw error(errc::dimension_mismatch, "unknown method");
}

namespace {

struct TrialCell {
  double value = 0.0;
  bool degenerate = false;
};

MethodStats reduce_cell(const std::vector<TrialCell>& trials) {
  std::vector<double> values;
  std::vector<double> squares;
  values.reserve(trials.size());
  squares.reserve(trials.size());
  int degenerate = 0;
  for (const TrialCell& t : trials) {
    if (t.degenerate) {
      ++degenerate;
      continue;
    }
    values.push_back(t.value);
    squares.push_back(t.value * t.value);
  }
  MethodStats stats;
  stats.trials = static_cast<int>(values.size());
  stats.degenerate = degenerate;
  if (stats.trials > 0) {
    stats.mean = pairwise_sum(values) / stats.trials;
    if (stats.trials > 1) {
      const double mean_sq = pairwise_sum(squares) / stats.trials;
      const double variance =
          std::max(0.0, (mean_sq - stats.mean * stats.mean) * stats.trials / (stats.trials - 1));
      stats.std_err = std::sqrt(variance / stats.trials);
    }
  }
  return stats;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.trials < 1) throw error(errc::dimension_mismatch, "trials must be >= 1");
  const size_t num_grid = spec.p_db_grid.size();
  const size_t num_methods = spec.methods.size();

  // trial-major storage keyed by (grid, method, trial): filled concurrently,
  // reduced deterministically afterwards.
  std::vector<std::vector<std::vector<TrialCell>>> cells(
      num_grid, std::vector<std::vector<TrialCell>>(
                    num_methods, std::vector<TrialCell>(static_cast<size_t>(spec.trials))));

  int threads = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = std::min<int>(threads, spec.trials);

  auto worker = [&](int worker_index) {
    for (int trial = worker_index; trial < spec.trials; trial += threads) {
      for (size_t g = 0; g < num_grid; ++g) {
        const double p_total = std::pow(10.0, spec.p_db_grid[g] / 10.0);
        const std::uint64_t stream =
            (static_cast<std::uint64_t>(g) << 32) + static_cast<std::uint64_t>(trial);
        const Mat h = generate_channel(spec.seed, stream, spec.n, spec.l);
        for (size_t m = 0; m < num_methods; ++m) {
          TrialCell& cell = cells[g][m][static_cast<size_t>(trial)];
          try {
            cell.value = run_trial(spec.methods[m], h, p_total, spec.optimizer, spec.capacity_tol);
          } catch (const error&) {
            cell.degenerate = true;
          }
        }
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (std::thread& t : pool) t.join();
  }

  SweepResult result;
  result.p_db = spec.p_db_grid;
  result.methods = spec.methods;
  result.cells.resize(num_grid);
  for (size_t g = 0; g < num_grid; ++g) {
    result.cells[g].reserve(num_methods);
    for (size_t m = 0; m < num_methods; ++m) {
      MethodStats stats = reduce_cell(cells[g][m]);
      if (stats.degenerate * 100 >= spec.trials) {
        throw error(errc::degenerate_fraction_exceeded,
                    std::string("method ") + method_name(spec.methods[m]) + " degenerate in >= 1% of trials");
      }
      result.cells[g].push_back(stats);
    }
  }
  return result;
}

std::string csv_string(const SweepResult& result) {
  std::string out = "p_db,method,mean_sum_rate,std_err,trials,degenerate\n";
  char buffer[160];
  for (size_t g = 0; g < result.p_db.size(); ++g) {
    for (size_t m = 0; m < result.methods.size(); ++m) {
      const MethodStats& stats = result.cells[g][m];
      std::snprintf(buffer, sizeof(buffer), "%.6g,%s,%.6g,%.6g,%d,%d\n", result.p_db[g],
                    method_name(result.methods[m]), stats.mean, stats.std_err, stats.trials,
                    stats.degenerate);
      out += buffer;
    }
  }
  return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw error(errc::io_error, "cannot open " + path + " for writing");
  file << csv_string(result);
  if (!file.good()) throw error(errc::io_error, "write failed for " + path);
}

}  // namespace ifd
