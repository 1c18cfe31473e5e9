#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ifd/harness.hpp"
#include "ifd/rng.hpp"

using namespace ifd;

TEST_CASE("channel generation is deterministic per (seed, index)") {
  const Mat a = generate_channel(12345, 7, 3, 4);
  const Mat b = generate_channel(12345, 7, 3, 4);
  CHECK(a == b);  // bit-for-bit

  const Mat c = generate_channel(12345, 8, 3, 4);
  CHECK(a != c);
  const Mat d = generate_channel(12346, 7, 3, 4);
  CHECK(a != d);
}

TEST_CASE("pooled channel entries pass the moment check") {
  double sum = 0.0, sum_sq = 0.0;
  const int trials = 2500;       // 2500 * 20 * 20 = 1e6 entries
  for (int t = 0; t < trials; ++t) {
    const Mat h = generate_channel(999, static_cast<std::uint64_t>(t), 20, 20);
    sum += h.sum();
    sum_sq += h.squaredNorm();
  }
  const double n = trials * 400.0;
  const double mean = sum / n;
  const double variance = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(variance > 0.99);
  CHECK(variance < 1.01);
}

TEST_CASE("single-trial sweep equals the direct computation") {
  SweepSpec spec;
  spec.n = 2;
  spec.l = 2;
  spec.p_db_grid = {10.0};
  spec.trials = 1;
  spec.seed = 5;
  const SweepResult result = run_sweep(spec);

  const Mat h = generate_channel(5, 0, 2, 2);
  const double p_total = std::pow(10.0, 1.0);
  for (size_t m = 0; m < spec.methods.size(); ++m) {
    const double direct = run_trial(spec.methods[m], h, p_total, spec.optimizer, spec.capacity_tol);
    CHECK(result.cells[0][m].mean == doctest::Approx(direct).epsilon(1e-15));
    CHECK(result.cells[0][m].trials == 1);
    CHECK(result.cells[0][m].degenerate == 0);
  }
}

TEST_CASE("empty grid emits a header-only CSV") {
  SweepSpec spec;
  spec.p_db_grid = {};
  spec.trials = 1;
  const SweepResult result = run_sweep(spec);
  CHECK(csv_string(result) == "p_db,method,mean_sum_rate,std_err,trials,degenerate\n");
}

TEST_CASE("CSV has one row per grid point and method, parseable at 6 digits") {
  SweepSpec spec;
  spec.n = 2;
  spec.l = 2;
  spec.p_db_grid = {0.0, 10.0, 20.0};
  spec.trials = 8;
  spec.seed = 11;
  const SweepResult result = run_sweep(spec);
  const std::string csv = csv_string(result);

  std::stringstream stream(csv);
  std::string line;
  std::getline(stream, line);
  CHECK(line == "p_db,method,mean_sum_rate,std_err,trials,degenerate");

  int rows = 0;
  size_t grid = 0, method = 0;
  while (std::getline(stream, line)) {
    char name[64];
    double p_db, mean, std_err;
    int trials, degenerate;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%63[^,],%lf,%lf,%d,%d", &p_db, name, &mean, &std_err,
                        &trials, &degenerate) == 6);
    const MethodStats& stats = result.cells[grid][method];
    // 6 significant digits survive the round trip.
    const double tol = std::max(1e-5 * std::abs(stats.mean), 1e-12);
    CHECK(std::abs(mean - stats.mean) <= tol);
    CHECK(trials == stats.trials);
    ++rows;
    if (++method == result.methods.size()) {
      method = 0;
      ++grid;
    }
  }
  CHECK(rows == 9);
}

TEST_CASE("sweep output is byte-identical across parallelism degrees") {
  SweepSpec spec;
  spec.n = 2;
  spec.l = 3;
  spec.p_db_grid = {5.0, 15.0};
  spec.trials = 24;
  spec.seed = 31337;

  spec.threads = 1;
  const std::string serial = csv_string(run_sweep(spec));
  spec.threads = 8;
  const std::string parallel = csv_string(run_sweep(spec));
  CHECK(serial == parallel);
}

TEST_CASE("per-trial ordering sanity: capacity >= IF >= ZF") {
  SweepSpec spec;
  spec.n = 2;
  spec.l = 3;
  spec.seed = 77;
  for (int trial = 0; trial < 40; ++trial) {
    const Mat h = generate_channel(spec.seed, static_cast<std::uint64_t>(trial), spec.n, spec.l);
    const double p_total = std::pow(10.0, 1.5);
    const double cap = run_trial(Method::capacity, h, p_total, spec.optimizer, spec.capacity_tol);
    const double if_sum =
        run_trial(Method::integer_forcing, h, p_total, spec.optimizer, spec.capacity_tol);
    const double zf_sum =
        run_trial(Method::zero_forcing, h, p_total, spec.optimizer, spec.capacity_tol);
    CHECK(cap >= if_sum - 1e-7);
    CHECK(if_sum >= zf_sum - 1e-9);
  }
}
