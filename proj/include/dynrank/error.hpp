#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dynrank {

enum class Errc {
  zero_inverse,
  bad_prime,
  not_square,
  index_out_of_range,
  dimension_mismatch,
  k_too_small,
  already_active,
  already_inactive,
  singular_init,
  empty_log,
  bad_label,
  self_loop,
  negative_weight,
  duplicate_insert,
  missing_delete,
  not_bipartite,
  parse_error,
  dimension_error,
  mode_mismatch,
  verify_failure,
  probabilistic_failure,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dynrank
