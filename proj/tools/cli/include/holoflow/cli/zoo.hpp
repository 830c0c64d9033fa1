#pragma once

#include <string>

#include "holoflow/fields.hpp"

namespace holoflow::cli {

/// Builds a field R^d -> R^d from the zoo grammar
///
///   field := term ('+' term)*
///   term  := [coef '*'] atom
///   atom  := zero | chi | plateau-shift:c | gaussian:amp[:center[:sigma]]
///          | psi:n:beta | linear:a
///
/// psi is only defined for d = 1 and caps the order at n. Throws
/// std::invalid_argument naming the offending term.
JetEvaluator parse_field(const std::string& spec, int dim, int order);

}  // namespace holoflow::cli
