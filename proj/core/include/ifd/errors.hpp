#pragma once

#include <stdexcept>
#include <string>

namespace ifd {

enum class errc {
  dimension_mismatch,
  power_budget_exceeded,
  rank_deficient_integer_matrix,
  nonfinite_entries,
  nonpositive_power,
  numerically_singular_gram,
  invalid_delta,
  nonpositive_beta,
  not_a_z_matrix,
  not_m_matrix,
  unbounded_rate,
  infeasible_duality_step,
  degenerate_beta,
  multi_antenna_user_unsupported,
  singular_mod_p,
  zero_leading_minor,
  verification_failed,
  prime_search_exhausted,
  degenerate_fraction_exceeded,
  io_error,
};

const char* errc_name(errc code) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace ifd
