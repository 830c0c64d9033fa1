#pragma once

#include <span>
#include <vector>

#include "holoflow/jets.hpp"
#include "holoflow/oracle/symbolic.hpp"

namespace holoflow::test {

/// Jet of the map x -> (comps_0(x), ...) from the symbolic oracle.
inline Jet oracle_jet(const std::vector<oracle::ExprPtr>& comps, int dim, int order, std::span<const double> x) {
  Jet j(dim, static_cast<int>(comps.size()), order);
  for (std::size_t o = 0; o < comps.size(); ++o) {
    oracle::Partials partials(comps[o]);
    for (int k = 0; k <= order; ++k) {
      const auto t = partials.tensor(k, dim, x);
      std::copy(t.begin(), t.end(), j.block(k).begin() + static_cast<std::ptrdiff_t>(o * t.size()));
    }
  }
  return j;
}

/// max |a - b| / max(1, max |b|) over all entries.
inline double rel_diff(const Jet& a, const Jet& b) {
  double diff = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < b.data().size(); ++i) {
    diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
    scale = std::max(scale, std::abs(b.data()[i]));
  }
  return diff / scale;
}

}  // namespace holoflow::test
