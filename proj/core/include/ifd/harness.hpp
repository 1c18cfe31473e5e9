#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ifd/model.hpp"
#include "ifd/optimizer.hpp"

namespace ifd {

enum class Method { capacity, integer_forcing, zero_forcing };

const char* method_name(Method m) noexcept;

struct SweepSpec {
  int n = 2;                       // basestation antennas
  int l = 2;                       // single-antenna users
  std::vector<double> p_db_grid;   // total power grid in dB (unit noise variance)
  int trials = 10000;
  std::uint64_t seed = 0;
  std::vector<Method> methods = {Method::capacity, Method::integer_forcing, Method::zero_forcing};
  OptimizerOptions optimizer;
  double capacity_tol = 1e-7;
  int threads = 0;                 // 0: hardware concurrency
};

struct MethodStats {
  double mean = 0.0;
  double std_err = 0.0;
  int trials = 0;
  int degenerate = 0;
};

struct SweepResult {
  std::vector<double> p_db;
  std::vector<Method> methods;
  // cells[g][m]: grid point g, method index m (into `methods`)
  std::vector<std::vector<MethodStats>> cells;
};

// Deterministic given (seed, trial_index): an i.i.d. standard normal n x m
// matrix drawn from a counter-based stream.
Mat generate_channel(std::uint64_t seed, std::uint64_t trial_index, int n, int m);

// Monte Carlo sweep over the power grid. Per-trial optimizer failures become
// degenerate counters, never aborts; means use a fixed pairwise-summation tree
// so results are identical at any parallelism degree. A degenerate fraction of
// 1% or more at any cell fails the run.
SweepResult run_sweep(const SweepSpec& spec);

// CSV with header p_db,method,mean_sum_rate,std_err,trials,degenerate and
// 6-significant-digit values.
void emit_csv(const SweepResult& result, const std::string& path);
std::string csv_string(const SweepResult& result);

// Sum over a fixed balanced tree, independent of accumulation order elsewhere.
double pairwise_sum(const std::vector<double>& values);

// Single trial of one method at one power level; used by the sweep and the CLI.
// Returns the trial's sum rate; throws ifd::error for degenerate trials.
double run_trial(Method method, const Mat& channel, double p_total, const OptimizerOptions& opts,
                 double capacity_tol);

}  // namespace ifd
