#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dwde {

enum class Errc {
  bad_partition,
  non_expanding,
  non_markov_image,
  out_of_domain,
  enumeration_too_large,
  invalid_model,
  horizon_zero,
  budget_exceeded,
  window_too_small,
  singular_system,
  unsupported_base,
  unsupported_jumps,
  hypothesis_violated,
  degenerate_alpha,
  io_failure,
  config_error,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the Python layer can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dwde
