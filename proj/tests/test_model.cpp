#include <doctest.h>

#include "ifd/model.hpp"
#include "ifd/optimizer.hpp"

using namespace ifd;

namespace {

UplinkConfig two_user_identity_config() {
  ChannelUplink h;
  h.entries = Mat::Identity(2, 2);
  h.user_antennas = {1, 1};
  UplinkConfig cfg = default_uplink_init(h, 2.0);
  cfg.p.diagonal = Vec::Ones(2);  // Tr(C^T C P) = 2 = budget
  return cfg;
}

}  // namespace

TEST_CASE("validate accepts a well-formed identity config") {
  const UplinkConfig cfg = two_user_identity_config();
  CHECK_FALSE(validate(cfg).has_value());
  // Idempotent and side-effect free.
  CHECK_FALSE(validate(cfg).has_value());
}

TEST_CASE("validate rejects a rank-deficient integer matrix") {
  UplinkConfig cfg = two_user_identity_config();
  cfg.a << 1, 1, 2, 2;
  const auto err = validate(cfg);
  REQUIRE(err.has_value());
  CHECK(err->code() == errc::rank_deficient_integer_matrix);
}

TEST_CASE("validate rejects a power overdraw") {
  UplinkConfig cfg = two_user_identity_config();
  cfg.p.diagonal *= 1.01;
  const auto err = validate(cfg);
  REQUIRE(err.has_value());
  CHECK(err->code() == errc::power_budget_exceeded);
}

TEST_CASE("validate rejects dimension mismatches and non-finite entries") {
  UplinkConfig cfg = two_user_identity_config();
  cfg.b = Mat::Zero(3, 2);
  REQUIRE(validate(cfg).has_value());
  CHECK(validate(cfg)->code() == errc::dimension_mismatch);

  UplinkConfig nan_cfg = two_user_identity_config();
  nan_cfg.channel.entries(0, 0) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE(validate(nan_cfg).has_value());
  CHECK(validate(nan_cfg)->code() == errc::nonfinite_entries);
}

TEST_CASE("downlink validation mirrors the uplink checks") {
  DownlinkConfig cfg;
  cfg.channel.blocks = {Mat::Identity(1, 2), Mat::Ones(1, 2)};
  cfg.a = IntMat::Identity(2, 2);
  cfg.b = Mat::Identity(2, 2);
  cfg.c = {Vec::Ones(1), Vec::Ones(1)};
  cfg.p.diagonal = Vec::Ones(2);
  cfg.p.budget = 2.0;
  CHECK_FALSE(validate(cfg).has_value());

  cfg.p.budget = 1.0;
  REQUIRE(validate(cfg).has_value());
  CHECK(validate(cfg)->code() == errc::power_budget_exceeded);
}

TEST_CASE("channel transposition round-trips") {
  ChannelUplink h;
  h.entries = Mat::Random(3, 5);
  h.user_antennas = {2, 1, 2};
  const ChannelDownlink d = transpose_channel(h);
  REQUIRE(d.num_users() == 3);
  CHECK(d.blocks[0].rows() == 2);
  CHECK(d.blocks[1].rows() == 1);
  CHECK(d.stacked().isApprox(h.entries.transpose()));
  const ChannelUplink back = transpose_channel(d);
  CHECK(back.entries.isApprox(h.entries));
  CHECK(back.user_antennas == h.user_antennas);
}
