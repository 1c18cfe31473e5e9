#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ifd/errors.hpp"
#include "ifd/exact.hpp"

namespace ifd {

// Square matrix of canonical residues over Z_p, p prime.
struct FieldMatrix {
  IntMat entries;   // values in [0, p)
  std::int64_t p;
};

FieldMatrix reduce_mod_p(const IntMat& a, std::int64_t p);

std::int64_t mod_inverse(std::int64_t value, std::int64_t p);

// Smallest prime >= floor under which det(a) and every leading principal minor
// stay nonzero. Search is capped at 1e6 with an explicit failure.
std::int64_t choose_prime(const IntMat& a, std::int64_t floor);

// Gauss-Jordan inverse over Z_p; throws singular-mod-p.
FieldMatrix invert_mod_p(const FieldMatrix& q);

// Lower unitriangular l_bar with a_bar = [l_bar a] mod p upper triangular and
// nonzero diagonal. Requires the leading principal minors of a to be nonzero
// mod p; fails with zero-leading-minor otherwise.
std::pair<FieldMatrix, FieldMatrix> triangularize_over_zp(const IntMat& a, std::int64_t p);

// Per-user signal-level layout, indexed top-down from level 1.
// User l: levels 1..k_c[l] are "don't care" (set by decoding-side effects,
// observed as interference), levels k_c[l]+1..k_f[l] carry information, and
// levels k_f[l]+1..k are zero. Users come sorted by decreasing power, which
// makes k_c nondecreasing.
struct LevelPlan {
  std::vector<int> k_c;
  std::vector<int> k_f;
  int k = 0;

  int num_users() const { return static_cast<int>(k_c.size()); }
  int info_length(int l) const { return k_f[static_cast<size_t>(l)] - k_c[static_cast<size_t>(l)]; }
  void validate() const;
};

// Per-user message symbols over Z_p occupying the plan's information bands.
struct MessageSet {
  LevelPlan plan;
  std::int64_t p = 0;
  std::vector<std::vector<std::int64_t>> symbols;  // symbols[l] has info_length(l) entries

  void validate() const;
};

MessageSet random_message_set(const LevelPlan& plan, std::int64_t p, std::uint64_t seed);

// Precoded symbol columns v plus the interference labels e that the staged
// inversion pre-subtracted. Both are per-user vectors over all k levels.
struct PrecodeResult {
  std::vector<std::vector<std::int64_t>> v;
  std::vector<std::vector<std::int64_t>> e;
};

// Staged pre-inversion: the shared bottom levels get the full inverse of q_d;
// each higher stage applies the inverse of the corresponding leading principal
// submatrix with the later users' "don't care" interference subtracted first.
// The interference values are a deterministic pseudorandom function of
// (e_seed, user), modeling quantities the encoder observes but cannot choose.
PrecodeResult downlink_precode(const MessageSet& w, const FieldMatrix& q_d, std::uint64_t e_seed);

// Forms each receiver's combination u_m = sum_l q_{m,l} (v_l - e_l) over Z_p,
// asserts it reproduces the original messages on every information level, and
// returns the extracted messages. verification-failed signals a bug.
MessageSet downlink_decode_verify(const PrecodeResult& precoded, const FieldMatrix& q_d,
                                  const MessageSet& original);

// Solves stacked linear combinations u = Q w per level and extracts the
// information bands; the "don't care" values carried in u do not matter.
MessageSet uplink_sic_solve(const std::vector<std::vector<std::int64_t>>& u,
                            const FieldMatrix& q_u, const LevelPlan& plan);

}  // namespace ifd
