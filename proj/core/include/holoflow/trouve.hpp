#pragma once

#include <optional>
#include <span>
#include <vector>

#include "holoflow/flow.hpp"
#include "holoflow/group.hpp"

namespace holoflow {

/// Straight segment t -> gamma(t) = Id + t phi, t in [0, 1].
struct SegmentPath {
  JetEvaluator phi;
  /// min over the t grid and spatial grid of det(I + t dphi(x)).
  double certificate = 0.0;
};

/// Default time grid for certificates: 33 equispaced points of [0, 1].
std::vector<double> default_t_grid();

/// Throws NumericalError(segment_not_admissible) if the certificate is <= 0.
SegmentPath certify_segment(const JetEvaluator& phi, std::span<const double> t_grid,
                            const std::optional<SampleGrid>& grid = std::nullopt);

/// u(t, x) = phi(gamma(t)^{-1}(x)), whose flow is gamma(t). The preimage
/// y = x + tau solves tau + t phi(x + tau) = 0 by Newton from tau = -t phi(x).
TimeField segment_field(const JetEvaluator& phi, std::span<const double> t_grid,
                        const std::optional<SampleGrid>& grid = std::nullopt);
TimeField segment_field(const JetEvaluator& phi);

/// Piecewise field through Id, vertices[0], ..., vertices[m-1]: on [j/m, (j+1)/m]
/// it is the rescaled segment field of vertices[j] o vertices[j-1]^{-1}, so the
/// flow at time 1 is the last vertex. Throws NumericalError(polygon_not_admissible)
/// with the failing segment index.
TimeField polygon_field(const std::vector<DiffeoField>& vertices);

/// ||Phi_u(1) - (Id + phi)||_{n,alpha} on `grid` with u = segment_field(phi).
double roundtrip_error(const JetEvaluator& phi, int n, double alpha, int steps, const SampleGrid& grid,
                       std::size_t pair_budget = kDefaultPairBudget);

}  // namespace holoflow
