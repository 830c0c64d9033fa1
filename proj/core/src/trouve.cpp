#include "holoflow/trouve.hpp"

#include <algorithm>
#include <stdexcept>

#include "holoflow/error.hpp"
#include "holoflow/parallel.hpp"

namespace holoflow {

std::vector<double> default_t_grid() {
  std::vector<double> t(33);
  for (int i = 0; i < 33; ++i) t[static_cast<std::size_t>(i)] = i / 32.0;
  return t;
}

SegmentPath certify_segment(const JetEvaluator& phi, std::span<const double> t_grid,
                            const std::optional<SampleGrid>& grid) {
  if (phi.dim_in() != phi.dim_out() || phi.order() < 1) {
    throw std::invalid_argument("segment target must be a chart R^d -> R^d of order >= 1");
  }
  if (t_grid.empty()) throw std::invalid_argument("segment certificate needs a nonempty t grid");
  const int d = phi.dim_in();
  const SampleGrid g = grid ? *grid : SampleGrid::over(phi.support());
  const auto& pts = g.points();
  std::vector<double> worst(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Jet j = phi(pts[i], 1);
    const auto a = j.block(1);
    double m = 1.0;
    std::vector<double> id_plus(a.size());
    for (double t : t_grid) {
      for (std::size_t e = 0; e < a.size(); ++e) id_plus[e] = t * a[e];
      for (int c = 0; c < d; ++c) id_plus[static_cast<std::size_t>(c * d + c)] += 1.0;
      m = std::min(m, jacobian_det(id_plus, d));
    }
    worst[i] = m;
  });
  const double cert = *std::min_element(worst.begin(), worst.end());
  if (!(cert > 0.0)) {
    throw NumericalError(ErrorCode::segment_not_admissible,
                         "det(I + t dphi) reaches " + std::to_string(cert) + " on the segment");
  }
  return {phi, cert};
}

TimeField segment_field(const JetEvaluator& phi) {
  const auto t = default_t_grid();
  return segment_field(phi, t);
}

TimeField segment_field(const JetEvaluator& phi, std::span<const double> t_grid, const std::optional<SampleGrid>& grid) {
  if (!phi.value_bound()) throw std::invalid_argument("segment_field needs a value bound on phi");
  certify_segment(phi, t_grid, grid);
  const int d = phi.dim_in();
  TimeField::Fn fn = [phi, d](double t, std::size_t, std::span<const double> x, int ord) {
    const int jet_order = std::max(ord, 1);
    const JetEvaluator step = scaled(phi, t);
    const Jet at_x = step(x, 0);
    Point start(x.begin(), x.end());
    for (int i = 0; i < d; ++i) start[static_cast<std::size_t>(i)] -= at_x.value()[static_cast<std::size_t>(i)];
    const Point y = newton_preimage(step, x, start);
    const Jet phi_y = phi(y, jet_order);
    Jet gamma = phi_y;
    gamma *= t;
    gamma += identity_jet(y, jet_order);
    const Jet inv = inverse_jet(gamma, y);
    return jet_compose(phi_y, inv, jet_order).truncated(ord);
  };
  return TimeField(d, phi.order(), phi.support().enlarged(*phi.value_bound()), {}, "segment(" + phi.label() + ")",
                   std::move(fn));
}

TimeField polygon_field(const std::vector<DiffeoField>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("polygon needs at least one vertex");
  const int d = vertices.front().dim();
  const int order = vertices.front().order();
  std::vector<TimeField> segments;
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    if (vertices[j].dim() != d || vertices[j].order() != order) {
      throw std::invalid_argument("polygon vertices must share dimension and order");
    }
    try {
      const JetEvaluator rel = j == 0 ? vertices[0].phi() : compose(vertices[j], invert(vertices[j - 1])).phi();
      segments.push_back(segment_field(rel));
    } catch (const NumericalError& e) {
      throw NumericalError(ErrorCode::polygon_not_admissible,
                           "polygon segment " + std::to_string(j) + " is not admissible: " + e.what(), j);
    }
  }
  const auto m = static_cast<double>(segments.size());
  std::vector<double> breaks;
  for (std::size_t j = 1; j < segments.size(); ++j) breaks.push_back(static_cast<double>(j) / m);
  Box support = segments.front().support();
  std::string label = "polygon(";
  for (std::size_t j = 0; j < segments.size(); ++j) {
    support = support.hull(segments[j].support());
    label += (j ? ";" : "") + segments[j].label();
  }
  label += ")";
  TimeField::Fn fn = [segments, m](double t, std::size_t p, std::span<const double> x, int ord) {
    const double s = std::clamp(m * t - static_cast<double>(p), 0.0, 1.0);
    Jet j = segments[p](s, 0, x, ord);
    j *= m;
    return j;
  };
  return TimeField(d, order, std::move(support), std::move(breaks), std::move(label), std::move(fn));
}

double roundtrip_error(const JetEvaluator& phi, int n, double alpha, int steps, const SampleGrid& grid,
                       std::size_t pair_budget) {
  const TimeField u = segment_field(phi);
  const JetSamples flowed = integrate_flow(u, grid.points(), n, FlowOptions{steps, 0, 1.0}).chart_samples(grid);
  const JetSamples target = JetSamples::evaluate(phi, grid, n);
  return hoelder_norm(flowed - target, n, alpha, pair_budget).value;
}

}  // namespace holoflow
