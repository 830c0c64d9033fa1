#include "holoflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

#include "holoflow/csv.hpp"
#include "holoflow/error.hpp"
#include "holoflow/parallel.hpp"

namespace holoflow {

namespace {

void check_breakpoints(const std::vector<double>& b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] > 0.0 && b[i] < 1.0)) throw std::invalid_argument("time breakpoints must lie in (0, 1)");
    if (i > 0 && !(b[i] > b[i - 1])) throw std::invalid_argument("time breakpoints must increase strictly");
  }
}

Box empty_support(int dim) { return Box::cube(dim, 0.0, 0.0); }

Box hull_of(const std::vector<TimeField::SeparableTerm>& terms, int dim) {
  if (terms.empty()) return empty_support(dim);
  Box b = terms.front().field.support();
  for (std::size_t i = 1; i < terms.size(); ++i) b = b.hull(terms[i].field.support());
  return b;
}

/// Piece of `outer` at the midpoint of each piece of a refined partition.
std::vector<std::size_t> piece_map(const TimeField& outer, const std::vector<double>& refined) {
  std::vector<std::size_t> map;
  for (std::size_t p = 0; p <= refined.size(); ++p) {
    const double a = p == 0 ? 0.0 : refined[p - 1];
    const double b = p == refined.size() ? 1.0 : refined[p];
    map.push_back(outer.piece_of(0.5 * (a + b)));
  }
  return map;
}

double euclid(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------- TimeField

TimeField::TimeField(int dim, int order, Box support, std::vector<double> breakpoints, std::string label, Fn fn) {
  if (dim < 1) throw std::invalid_argument("time field dimension must be positive");
  if (support.dim() != dim) throw std::invalid_argument("time field support has the wrong dimension");
  check_breakpoints(breakpoints);
  impl_ = std::make_shared<const Impl>(
      Impl{dim, order, std::move(support), std::move(breakpoints), std::move(label), std::move(fn), std::nullopt});
}

TimeField TimeField::separable(int dim, int order, std::vector<double> breakpoints, std::string label,
                               std::vector<SeparableTerm> terms) {
  if (dim < 1) throw std::invalid_argument("time field dimension must be positive");
  check_breakpoints(breakpoints);
  for (const auto& t : terms) {
    if (t.field.dim_in() != dim || t.field.dim_out() != dim) {
      throw std::invalid_argument("time field terms must map R^d to R^d");
    }
    if (t.field.order() < order) throw std::invalid_argument("time field term has too small an order");
  }
  Box support = hull_of(terms, dim);
  Fn fn = [terms, dim](double t, std::size_t piece, std::span<const double> x, int ord) {
    Jet out(dim, dim, ord);
    for (const auto& term : terms) {
      const double c = term.coef(t, piece);
      if (c == 0.0) continue;
      out.axpy(c, term.field(x, ord));
    }
    return out;
  };
  return TimeField(std::make_shared<const Impl>(Impl{dim, order, std::move(support), std::move(breakpoints),
                                                     std::move(label), std::move(fn), std::move(terms)}));
}

TimeField TimeField::zero(int dim, int order) { return separable(dim, order, {}, "zero", {}); }

TimeField TimeField::autonomous(const JetEvaluator& u) {
  return separable(u.dim_in(), u.order(), {}, u.label(), {{[](double, std::size_t) { return 1.0; }, u}});
}

TimeField TimeField::modulated(const JetEvaluator& u, std::function<double(double)> coef, std::string coef_label) {
  return separable(u.dim_in(), u.order(), {}, coef_label + "*" + u.label(),
                   {{[coef](double t, std::size_t) { return coef(t); }, u}});
}

TimeField TimeField::piecewise(std::vector<double> interior_breaks, const std::vector<TimeField>& pieces) {
  check_breakpoints(interior_breaks);
  if (pieces.size() != interior_breaks.size() + 1) {
    throw std::invalid_argument("piecewise field needs one piece per interval");
  }
  const int dim = pieces.front().dim();
  int order = pieces.front().order();
  bool all_separable = true;
  std::string label = "piecewise(";
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    if (pieces[j].dim() != dim) throw std::invalid_argument("piecewise field pieces differ in dimension");
    if (!pieces[j].breakpoints().empty()) throw std::invalid_argument("piecewise field pieces must be unbroken");
    order = std::min(order, pieces[j].order());
    all_separable = all_separable && pieces[j].terms().has_value();
    label += (j ? ";" : "") + pieces[j].label();
  }
  label += ")";
  if (all_separable) {
    std::vector<SeparableTerm> terms;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      for (const auto& term : *pieces[j].terms()) {
        terms.push_back({[j, c = term.coef](double t, std::size_t p) { return p == j ? c(t, 0) : 0.0; }, term.field});
      }
    }
    return separable(dim, order, std::move(interior_breaks), std::move(label), std::move(terms));
  }
  Box support = pieces.front().support();
  for (const auto& p : pieces) support = support.hull(p.support());
  Fn fn = [pieces](double t, std::size_t piece, std::span<const double> x, int ord) {
    return pieces.at(piece)(t, 0, x, ord);
  };
  return TimeField(dim, order, std::move(support), std::move(interior_breaks), std::move(label), std::move(fn));
}

double TimeField::piece_begin(std::size_t p) const { return p == 0 ? 0.0 : impl_->breakpoints.at(p - 1); }

double TimeField::piece_end(std::size_t p) const {
  return p == impl_->breakpoints.size() ? 1.0 : impl_->breakpoints.at(p);
}

std::size_t TimeField::piece_of(double t) const {
  const auto& b = impl_->breakpoints;
  return static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), t) - b.begin());
}

Jet TimeField::operator()(double t, std::size_t piece, std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) != impl_->dim) throw std::invalid_argument("time field query has wrong dimension");
  if (order > impl_->order) throw std::invalid_argument("time field order exceeded");
  if (piece >= pieces()) throw std::invalid_argument("time field piece out of range");
  if (!impl_->support.contains(x)) return Jet(impl_->dim, impl_->dim, order);
  return impl_->fn(t, piece, x, order);
}

JetEvaluator TimeField::at(double t) const {
  const TimeField self = *this;
  const std::size_t piece = piece_of(t);
  std::optional<double> bound;
  if (impl_->terms) {
    double b = 0.0;
    for (const auto& term : *impl_->terms) {
      if (!term.field.value_bound()) {
        b = std::numeric_limits<double>::quiet_NaN();
        break;
      }
      b += std::abs(term.coef(t, piece)) * *term.field.value_bound();
    }
    if (!std::isnan(b)) bound = b;
  }
  return JetEvaluator(
      impl_->dim, impl_->dim, impl_->order, impl_->support, impl_->label + "@t=" + format_double(t),
      [self, t, piece](std::span<const double> x, int ord) { return self(t, piece, x, ord); }, bound);
}

TimeField sum(const TimeField& u, const TimeField& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("time field sum: dimension mismatch");
  std::set<double> merged(u.breakpoints().begin(), u.breakpoints().end());
  merged.insert(v.breakpoints().begin(), v.breakpoints().end());
  std::vector<double> breaks(merged.begin(), merged.end());
  const auto mu = piece_map(u, breaks);
  const auto mv = piece_map(v, breaks);
  const int order = std::min(u.order(), v.order());
  const std::string label = u.label() + "+" + v.label();
  if (u.terms() && v.terms()) {
    std::vector<TimeField::SeparableTerm> terms;
    for (const auto& term : *u.terms()) {
      terms.push_back({[mu, c = term.coef](double t, std::size_t p) { return c(t, mu[p]); }, term.field});
    }
    for (const auto& term : *v.terms()) {
      terms.push_back({[mv, c = term.coef](double t, std::size_t p) { return c(t, mv[p]); }, term.field});
    }
    return TimeField::separable(u.dim(), order, std::move(breaks), label, std::move(terms));
  }
  TimeField::Fn fn = [u, v, mu, mv](double t, std::size_t p, std::span<const double> x, int ord) {
    Jet a = u(t, mu[p], x, ord);
    a += v(t, mv[p], x, ord);
    return a;
  };
  return TimeField(u.dim(), order, u.support().hull(v.support()), std::move(breaks), label, std::move(fn));
}

TimeField scaled(const TimeField& u, double c) {
  const std::string label = format_double(c) + "*" + u.label();
  if (u.terms()) {
    std::vector<TimeField::SeparableTerm> terms;
    for (const auto& term : *u.terms()) {
      terms.push_back({[c, k = term.coef](double t, std::size_t p) { return c * k(t, p); }, term.field});
    }
    return TimeField::separable(u.dim(), u.order(), u.breakpoints(), label, std::move(terms));
  }
  TimeField::Fn fn = [u, c](double t, std::size_t p, std::span<const double> x, int ord) {
    Jet a = u(t, p, x, ord);
    a *= c;
    return a;
  };
  return TimeField(u.dim(), u.order(), u.support(), u.breakpoints(), label, std::move(fn));
}

TimeField reversed(const TimeField& u) {
  std::vector<double> breaks;
  for (auto it = u.breakpoints().rbegin(); it != u.breakpoints().rend(); ++it) breaks.push_back(1.0 - *it);
  const std::size_t last = u.pieces() - 1;
  const std::string label = "rev(" + u.label() + ")";
  if (u.terms()) {
    std::vector<TimeField::SeparableTerm> terms;
    for (const auto& term : *u.terms()) {
      terms.push_back(
          {[last, k = term.coef](double t, std::size_t p) { return -k(1.0 - t, last - p); }, term.field});
    }
    return TimeField::separable(u.dim(), u.order(), std::move(breaks), label, std::move(terms));
  }
  TimeField::Fn fn = [u, last](double t, std::size_t p, std::span<const double> x, int ord) {
    Jet a = u(1.0 - t, last - p, x, ord);
    a *= -1.0;
    return a;
  };
  return TimeField(u.dim(), u.order(), u.support(), std::move(breaks), label, std::move(fn));
}

// ---------------------------------------------------------------- stepping

StepPlan plan_steps(const TimeField& u, int steps, double t_end) {
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (!(t_end > 0.0 && t_end <= 1.0)) throw std::invalid_argument("t_end must lie in (0, 1]");
  StepPlan plan;
  plan.times.push_back(0.0);
  for (std::size_t p = 0; p < u.pieces(); ++p) {
    const double a = u.piece_begin(p);
    if (a >= t_end) break;
    const double b = std::min(u.piece_end(p), t_end);
    const double len = b - a;
    const auto n = std::max<long>(1, static_cast<long>(std::ceil(len * steps - 1e-9)));
    for (long i = 1; i <= n; ++i) {
      plan.times.push_back(i == n ? b : a + len * static_cast<double>(i) / static_cast<double>(n));
      plan.piece.push_back(p);
    }
  }
  return plan;
}

namespace {

Jet velocity_jet(const TimeField& u, double t, std::size_t piece, const Jet& state, int order) {
  const Jet g = u(t, piece, state.value(), order);
  return jet_compose(g, state, order);
}

/// Integrates one seed, storing the state at each requested step index.
void integrate_seed(const TimeField& u, const StepPlan& plan, std::span<const double> x, int order,
                    const std::vector<std::size_t>& snap_steps, std::size_t seed,
                    const std::function<void(std::size_t, const Jet&)>& store) {
  Jet s = identity_jet(x, order);
  const int d = u.dim();
  std::size_t next_snap = 0;
  if (!snap_steps.empty() && snap_steps[0] == 0) store(next_snap++, s);
  for (std::size_t i = 0; i + 1 < plan.times.size(); ++i) {
    const double t0 = plan.times[i];
    const double h = plan.times[i + 1] - t0;
    const std::size_t p = plan.piece[i];
    const Jet k1 = velocity_jet(u, t0, p, s, order);
    Jet y = s;
    y.axpy(0.5 * h, k1);
    const Jet k2 = velocity_jet(u, t0 + 0.5 * h, p, y, order);
    y = s;
    y.axpy(0.5 * h, k2);
    const Jet k3 = velocity_jet(u, t0 + 0.5 * h, p, y, order);
    y = s;
    y.axpy(h, k3);
    const Jet k4 = velocity_jet(u, t0 + h, p, y, order);
    s.axpy(h / 6.0, k1);
    s.axpy(h / 3.0, k2);
    s.axpy(h / 3.0, k3);
    s.axpy(h / 6.0, k4);
    if (!s.all_finite()) {
      throw NumericalError(ErrorCode::numerical_blowup, "non-finite flow state at t = " + format_double(t0 + h),
                           seed);
    }
    if (order >= 1 && !(jacobian_det(s.block(1), d) > 0.0)) {
      throw NumericalError(ErrorCode::flow_degeneracy,
                           "det W^1 <= 0 at t = " + format_double(t0 + h) + "; step size too large?", seed);
    }
    while (next_snap < snap_steps.size() && snap_steps[next_snap] == i + 1) store(next_snap++, s);
  }
}

std::vector<std::size_t> snapshot_steps(const StepPlan& plan, int stride) {
  std::vector<std::size_t> out = {0};
  const std::size_t n = plan.times.size() - 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const bool boundary = i == n || plan.piece[i] != plan.piece[i - 1];
    const bool strided = stride > 0 && i % static_cast<std::size_t>(stride) == 0;
    if (boundary || strided) out.push_back(i);
  }
  return out;
}

}  // namespace

FlowTrajectory integrate_flow(const TimeField& u, const std::vector<Point>& seeds, int order,
                              const FlowOptions& opts) {
  if (order < 0 || order > u.order()) throw std::invalid_argument("flow order exceeds the field order");
  for (const auto& x : seeds) {
    if (static_cast<int>(x.size()) != u.dim()) throw std::invalid_argument("seed dimension differs from field");
  }
  const StepPlan plan = plan_steps(u, opts.steps, opts.t_end);
  FlowTrajectory traj;
  traj.source = u.label();
  traj.order = order;
  traj.steps = opts.steps;
  traj.seeds = seeds;
  traj.step_index = snapshot_steps(plan, opts.snapshot_stride);
  for (std::size_t s : traj.step_index) traj.times.push_back(plan.times[s]);
  traj.states.assign(traj.step_index.size(), std::vector<Jet>(seeds.size()));

  if (u.is_zero()) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const Jet id = identity_jet(seeds[i], order);
      for (auto& snap : traj.states) snap[i] = id;
    }
    return traj;
  }
  parallel_for(seeds.size(), [&](std::size_t i) {
    integrate_seed(u, plan, seeds[i], order, traj.step_index, i,
                   [&](std::size_t snap, const Jet& s) { traj.states[snap][i] = s; });
  });
  return traj;
}

Jet flow_jet(const TimeField& u, std::span<const double> x, int order, const FlowOptions& opts) {
  if (order < 0 || order > u.order()) throw std::invalid_argument("flow order exceeds the field order");
  if (u.is_zero()) return identity_jet(x, order);
  const StepPlan plan = plan_steps(u, opts.steps, opts.t_end);
  Jet out;
  integrate_seed(u, plan, x, order, {plan.times.size() - 1}, 0, [&](std::size_t, const Jet& s) { out = s; });
  return out;
}

DiffeoField flow_diffeo(const TimeField& u, int order, const FlowOptions& opts, const std::optional<SampleGrid>& grid) {
  const int d = u.dim();
  double diameter = 0.0;
  for (int i = 0; i < d; ++i) {
    const double w = u.support().hi[static_cast<std::size_t>(i)] - u.support().lo[static_cast<std::size_t>(i)];
    diameter += w * w;
  }
  diameter = std::sqrt(diameter);
  JetEvaluator chart(
      d, d, order, u.support(), "flow(" + u.label() + ")",
      [u, opts](std::span<const double> x, int ord) {
        Jet j = flow_jet(u, x, ord, opts);
        j -= identity_jet(x, ord);
        return j;
      },
      diameter);
  const SampleGrid g = grid ? *grid : SampleGrid::over(u.support());
  const FlowTrajectory traj = integrate_flow(u, g.points(), std::max(order, 1), opts);
  double min_det = 1.0;
  for (const auto& s : traj.final_state()) min_det = std::min(min_det, jacobian_det(s.block(1), d));
  return DiffeoField::certified(std::move(chart), min_det);
}

JetSamples FlowTrajectory::chart_samples(const SampleGrid& grid, std::size_t snapshot) const {
  if (grid.points() != seeds) throw std::invalid_argument("trajectory seeds differ from the grid points");
  std::vector<Jet> jets = states.at(snapshot);
  for (std::size_t i = 0; i < jets.size(); ++i) jets[i] -= identity_jet(seeds[i], order);
  return JetSamples(grid, std::move(jets));
}

// ---------------------------------------------------------------- norms in time

std::vector<double> norm_integrals(const TimeField& u, int level, int steps, const std::optional<SampleGrid>& grid,
                                   double t_end) {
  if (level < 0 || level > u.order()) throw std::invalid_argument("norm level exceeds the field order");
  const StepPlan plan = plan_steps(u, steps, t_end);

  std::function<double(double, std::size_t)> node_norm;
  if (u.terms()) {
    std::vector<double> sups;
    for (const auto& term : *u.terms()) {
      const SampleGrid g = grid ? *grid : SampleGrid::over(term.field.support());
      sups.push_back(sup_norm(term.field, level, g).value);
    }
    const auto terms = *u.terms();
    node_norm = [terms, sups](double t, std::size_t p) {
      double s = 0.0;
      for (std::size_t i = 0; i < terms.size(); ++i) s += std::abs(terms[i].coef(t, p)) * sups[i];
      return s;
    };
  } else {
    const SampleGrid g = grid ? *grid : SampleGrid::over(u.support());
    node_norm = [u, g, level](double t, std::size_t p) {
      const auto& pts = g.points();
      std::vector<double> vals(pts.size());
      parallel_for(pts.size(), [&](std::size_t i) { vals[i] = tensor_opnorm(u(t, p, pts[i], level).deriv(level)); });
      return *std::max_element(vals.begin(), vals.end());
    };
  }

  std::vector<double> cumulative = {0.0};
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < plan.times.size(); ++i) {
    const double a = plan.times[i];
    const double h = (plan.times[i + 1] - a) / 4.0;
    const std::size_t p = plan.piece[i];
    double f[5];
    for (int j = 0; j < 5; ++j) f[j] = node_norm(j == 4 ? plan.times[i + 1] : a + j * h, p);
    acc += h / 3.0 * (f[0] + 4.0 * f[1] + 2.0 * f[2] + 4.0 * f[3] + f[4]);
    cumulative.push_back(acc);
  }
  return cumulative;
}

GronwallReport gronwall_margins(const FlowTrajectory& traj, const TimeField& u, const std::optional<SampleGrid>& grid) {
  const auto i0 = norm_integrals(u, 0, traj.steps, grid, traj.times.back());
  std::vector<double> i1;
  if (traj.order >= 1) i1 = norm_integrals(u, 1, traj.steps, grid, traj.times.back());
  GronwallReport rep;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    GronwallRow row;
    row.t = traj.times[s];
    const std::size_t step = traj.step_index[s];
    for (std::size_t i = 0; i < traj.seeds.size(); ++i) {
      const Jet& j = traj.states[s][i];
      std::vector<double> disp(j.value().begin(), j.value().end());
      for (std::size_t c = 0; c < disp.size(); ++c) disp[c] -= traj.seeds[i][c];
      row.displacement = std::max(row.displacement, euclid(disp));
      if (traj.order >= 1) row.jacobian = std::max(row.jacobian, tensor_opnorm(j.deriv(1)));
    }
    row.bound_a = i0.at(step);
    row.margin_a = row.bound_a + 1e-6 * (1.0 + row.bound_a) - row.displacement;
    if (traj.order >= 1) {
      row.bound_b = std::exp(i1.at(step));
      row.margin_b = row.bound_b + 1e-6 * (1.0 + row.bound_b) - row.jacobian;
    }
    if (row.margin_a < 0.0 || row.margin_b < 0.0) rep.pass = false;
    rep.rows.push_back(row);
  }
  return rep;
}

GronwallReport gronwall_monitor(const FlowTrajectory& traj, const TimeField& u, const std::optional<SampleGrid>& grid) {
  GronwallReport rep = gronwall_margins(traj, u, grid);
  for (std::size_t s = 0; s < rep.rows.size(); ++s) {
    const auto& r = rep.rows[s];
    if (r.margin_a < 0.0 || r.margin_b < 0.0) {
      throw NumericalError(ErrorCode::monitor_failure,
                           "Gronwall monitor violated at t = " + format_double(r.t) + " (margins " +
                               format_double(r.margin_a) + ", " + format_double(r.margin_b) + ")",
                           s);
    }
  }
  return rep;
}

void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj, const GronwallReport* monitors) {
  const int d = traj.seeds.empty() ? 0 : static_cast<int>(traj.seeds.front().size());
  std::vector<std::string> header = {"t", "seed"};
  for (int c = 0; c < d; ++c) header.push_back("x" + std::to_string(c));
  header.push_back("det_w1");
  header.push_back("margin_a");
  header.push_back("margin_b");
  write_csv_row(os, header);
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    for (std::size_t i = 0; i < traj.seeds.size(); ++i) {
      const Jet& j = traj.states[s][i];
      std::vector<std::string> row = {format_double(traj.times[s]), std::to_string(i)};
      for (int c = 0; c < d; ++c) row.push_back(format_double(j.value()[static_cast<std::size_t>(c)]));
      row.push_back(traj.order >= 1 ? format_double(jacobian_det(j.block(1), d)) : "");
      row.push_back(monitors ? format_double(monitors->rows.at(s).margin_a) : "");
      row.push_back(monitors && traj.order >= 1 ? format_double(monitors->rows.at(s).margin_b) : "");
      write_csv_row(os, row);
    }
  }
}

// ---------------------------------------------------------------- experiments

double flowmap_distance(const TimeField& u, const TimeField& v, int n, double alpha, int steps,
                        const SampleGrid& grid, std::size_t pair_budget) {
  if (u.dim() != v.dim()) throw std::invalid_argument("flowmap_distance: dimension mismatch");
  const FlowOptions opts{steps, 0, 1.0};
  const auto a = integrate_flow(u, grid.points(), n, opts).chart_samples(grid);
  const auto b = integrate_flow(v, grid.points(), n, opts).chart_samples(grid);
  return hoelder_norm(a - b, n, alpha, pair_budget).value;
}

double l1_hoelder_norm(const TimeField& w, int n, double beta, const SampleGrid& grid, int steps,
                       std::size_t pair_budget) {
  if (!w.terms()) throw std::invalid_argument("L1 Hoelder norms need a separable time field");
  const StepPlan plan = plan_steps(w, steps);
  double total = 0.0;
  for (const auto& term : *w.terms()) {
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < plan.times.size(); ++i) {
      const double a = plan.times[i];
      const double h = (plan.times[i + 1] - a) / 4.0;
      double f[5];
      for (int j = 0; j < 5; ++j) f[j] = std::abs(term.coef(j == 4 ? plan.times[i + 1] : a + j * h, plan.piece[i]));
      integral += h / 3.0 * (f[0] + 4.0 * f[1] + 2.0 * f[2] + 4.0 * f[3] + f[4]);
    }
    if (integral == 0.0) continue;
    total += integral * hoelder_norm(term.field, n, beta, grid, pair_budget).value;
  }
  return total;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0.0 ? std::numeric_limits<double>::quiet_NaN() : sxy / sxx;
}

ExponentReport flowmap_exponent(const TimeField& u, const TimeField& w, std::span<const double> eps_list, int n,
                                double alpha, double beta, int steps, const SampleGrid& grid,
                                std::size_t pair_budget) {
  if (eps_list.size() < 3) throw std::invalid_argument("flowmap_exponent needs at least three eps values");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || (i > 0 && !(eps_list[i] < eps_list[i - 1]))) {
      throw std::invalid_argument("eps values must be positive and decreasing");
    }
  }
  if (!(0.0 < alpha && alpha < beta && beta <= 1.0)) throw std::invalid_argument("need 0 < alpha < beta <= 1");
  const FlowOptions opts{steps, 0, 1.0};
  const JetSamples base = integrate_flow(u, grid.points(), n, opts).chart_samples(grid);
  const double w_l1 = l1_hoelder_norm(w, n, beta, grid, steps, pair_budget);

  ExponentReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> lx, ly;
  for (double eps : eps_list) {
    const TimeField moved = sum(u, scaled(w, eps));
    const JetSamples other = integrate_flow(moved, grid.points(), n, opts).chart_samples(grid);
    ExponentRow row;
    row.eps = eps;
    row.distance = hoelder_norm(base - other, n, alpha, pair_budget).value;
    row.perturbation = eps * w_l1;
    row.ratio = row.perturbation == 0.0 ? 0.0 : row.distance / std::pow(row.perturbation, beta - alpha);
    if (row.distance > 0.0 && row.perturbation > 0.0) {
      lx.push_back(std::log(row.perturbation));
      ly.push_back(std::log(row.distance));
    }
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.min_ratio = std::min(rep.min_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  rep.slope = least_squares_slope(lx, ly);
  return rep;
}

}  // namespace holoflow
