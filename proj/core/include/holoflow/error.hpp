#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace holoflow {

/// Failure categories raised by the numerical routines. Argument validation
/// failures use std::invalid_argument instead.
enum class ErrorCode {
  not_a_diffeomorphism,
  singular_or_far_from_identity,
  ill_conditioned,
  flow_degeneracy,
  numerical_blowup,
  monitor_failure,
  segment_not_admissible,
  polygon_not_admissible,
};

std::string_view to_string(ErrorCode code);

class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorCode code, const std::string& what,
                 std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  /// Offending item (polygon segment, trajectory row, ...), if any.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace holoflow
