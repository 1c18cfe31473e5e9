#include <doctest.h>

#include <Eigen/Dense>

#include "ifd/exact.hpp"
#include "ifd/rng.hpp"
#include "oracles.hpp"

using ifd::IntMat;

TEST_CASE("determinant matches known values") {
  IntMat a(2, 2);
  a << 2, 1, 0, 1;
  CHECK(static_cast<long long>(ifd::int_det(a)) == 2);

  IntMat singular(2, 2);
  singular << 1, 1, 2, 2;
  CHECK(static_cast<long long>(ifd::int_det(singular)) == 0);

  IntMat needs_pivot(2, 2);
  needs_pivot << 0, 1, 1, 0;
  CHECK(static_cast<long long>(ifd::int_det(needs_pivot)) == -1);

  CHECK(static_cast<long long>(ifd::int_det(IntMat::Identity(5, 5))) == 1);
}

TEST_CASE("exact rank agrees with floating rank on random small matrices") {
  ifd::CounterRng rng(42, 0);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);  // L <= 6
    IntMat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = static_cast<std::int64_t>(rng.next_u64() % 21) - 10;

    Eigen::FullPivLU<ifd::Mat> lu(a.cast<double>());
    lu.setThreshold(1e-9);
    CHECK(ifd::int_rank(a) == static_cast<int>(lu.rank()));
  }
}

TEST_CASE("rank handles rectangular and duplicated rows") {
  IntMat a(3, 2);
  a << 1, 2, 2, 4, 3, 5;
  CHECK(ifd::int_rank(a) == 2);

  IntMat b(2, 3);
  b << 1, 2, 3, 2, 4, 6;
  CHECK(ifd::int_rank(b) == 1);
}

TEST_CASE("leading minors") {
  IntMat a(3, 3);
  a << 2, 1, 0, 0, 1, 0, 5, 5, 3;
  const auto minors = ifd::leading_minors(a);
  REQUIRE(minors.size() == 3);
  CHECK(static_cast<long long>(minors[0]) == 2);
  CHECK(static_cast<long long>(minors[1]) == 2);
  CHECK(static_cast<long long>(minors[2]) == 6);
  CHECK(ifd::leading_minors_nonzero(a));

  IntMat zero_start(2, 2);
  zero_start << 0, 1, 2, 1;
  CHECK_FALSE(ifd::leading_minors_nonzero(zero_start));
}
