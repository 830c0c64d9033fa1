#include "holoflow/error.hpp"

namespace holoflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_a_diffeomorphism: return "not-a-diffeomorphism";
    case ErrorCode::singular_or_far_from_identity: return "singular-or-far-from-identity";
    case ErrorCode::ill_conditioned: return "ill-conditioned";
    case ErrorCode::flow_degeneracy: return "flow-degeneracy";
    case ErrorCode::numerical_blowup: return "numerical-blowup";
    case ErrorCode::monitor_failure: return "monitor-failure";
    case ErrorCode::segment_not_admissible: return "segment-not-admissible";
    case ErrorCode::polygon_not_admissible: return "polygon-not-admissible";
  }
  return "unknown";
}

NumericalError::NumericalError(ErrorCode code, const std::string& what,
                               std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      index_(index) {}

}  // namespace holoflow
