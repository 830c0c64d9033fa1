#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holoflow/group.hpp"
#include "holoflow/hoelder.hpp"

namespace holoflow {

/// Time-dependent field u(t, x) on t in [0, 1] with explicit time breakpoints.
/// Between consecutive breakpoints the field is continuous in t; at a
/// breakpoint the `piece` argument selects the one-sided limit, piece p being
/// the interval [b_p, b_{p+1}] of the partition 0 = b_0 < ... < b_P = 1.
class TimeField {
 public:
  using Fn = std::function<Jet(double t, std::size_t piece, std::span<const double> x, int order)>;
  using Coefficient = std::function<double(double t, std::size_t piece)>;

  /// u(t, x) = sum_i coef_i(t, piece) f_i(x).
  struct SeparableTerm {
    Coefficient coef;
    JetEvaluator field;
  };

  /// General field. `support` must contain the spatial support of every u(t, .).
  TimeField(int dim, int order, Box support, std::vector<double> breakpoints, std::string label, Fn fn);

  static TimeField zero(int dim, int order);
  static TimeField autonomous(const JetEvaluator& u);
  /// coef(t) * u(x); coef must be continuous on [0, 1].
  static TimeField modulated(const JetEvaluator& u, std::function<double(double)> coef, std::string coef_label);
  /// Piece j is active on [breaks_{j-1}, breaks_j]; pieces must not have breakpoints of their own.
  static TimeField piecewise(std::vector<double> interior_breaks, const std::vector<TimeField>& pieces);
  static TimeField separable(int dim, int order, std::vector<double> breakpoints, std::string label,
                             std::vector<SeparableTerm> terms);

  int dim() const { return impl_->dim; }
  int order() const { return impl_->order; }
  const Box& support() const { return impl_->support; }
  const std::string& label() const { return impl_->label; }
  /// Interior breakpoints, sorted, in (0, 1).
  const std::vector<double>& breakpoints() const { return impl_->breakpoints; }
  std::size_t pieces() const { return impl_->breakpoints.size() + 1; }
  double piece_begin(std::size_t p) const;
  double piece_end(std::size_t p) const;
  /// Piece containing t; a breakpoint belongs to the piece on its right, t = 1 to the last piece.
  std::size_t piece_of(double t) const;

  Jet operator()(double t, std::size_t piece, std::span<const double> x, int order) const;
  Jet operator()(double t, std::span<const double> x, int order) const {
    return (*this)(t, piece_of(t), x, order);
  }
  /// Snapshot u(t, .) as a spatial field.
  JetEvaluator at(double t) const;

  /// Present when u is a finite sum of separable terms.
  const std::optional<std::vector<SeparableTerm>>& terms() const { return impl_->terms; }
  /// True for fields known to vanish identically (empty separable sum).
  bool is_zero() const { return impl_->terms && impl_->terms->empty(); }

  friend TimeField sum(const TimeField& u, const TimeField& v);
  friend TimeField scaled(const TimeField& u, double c);
  /// ubar(t) = -u(1 - t): its flow undoes the flow of u.
  friend TimeField reversed(const TimeField& u);

 private:
  struct Impl {
    int dim;
    int order;
    Box support;
    std::vector<double> breakpoints;
    std::string label;
    Fn fn;
    std::optional<std::vector<SeparableTerm>> terms;
  };
  explicit TimeField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

TimeField sum(const TimeField& u, const TimeField& v);
TimeField scaled(const TimeField& u, double c);
TimeField reversed(const TimeField& u);

/// Uniform steps on each piece: piece p gets max(1, ceil(length_p * steps)) steps.
struct StepPlan {
  std::vector<double> times;        // step boundaries, 0 .. t_end
  std::vector<std::size_t> piece;   // piece of step i (times[i] .. times[i+1])
};

StepPlan plan_steps(const TimeField& u, int steps, double t_end = 1.0);

struct FlowOptions {
  int steps = 256;
  /// Record a snapshot every `snapshot_stride` steps (0: only piece boundaries and the end).
  int snapshot_stride = 0;
  double t_end = 1.0;
};

/// Flow jets Phi(t, .) at the seeds: value Phi(t, x), blocks W^k = d^k_x Phi(t, x).
struct FlowTrajectory {
  std::string source;
  int order = 0;
  int steps = 0;
  std::vector<Point> seeds;
  std::vector<double> times;
  std::vector<std::size_t> step_index;   // position of each snapshot in plan_steps(...).times
  std::vector<std::vector<Jet>> states;  // states[snapshot][seed]

  const std::vector<Jet>& final_state() const { return states.back(); }
  /// Samples of the chart Phi(t, .) - Id at snapshot s; seeds must equal grid.points().
  JetSamples chart_samples(const SampleGrid& grid, std::size_t snapshot) const;
  JetSamples chart_samples(const SampleGrid& grid) const { return chart_samples(grid, states.size() - 1); }
};

/// Classical RK4 on positions and jets simultaneously, breakpoint-aligned.
/// Throws NumericalError(flow_degeneracy) if det W^1 <= 0 and
/// NumericalError(numerical_blowup) on non-finite values; the index is the seed.
FlowTrajectory integrate_flow(const TimeField& u, const std::vector<Point>& seeds, int order,
                              const FlowOptions& opts = {});

/// Order-n jet of Phi(t_end, .) at one point.
Jet flow_jet(const TimeField& u, std::span<const double> x, int order, const FlowOptions& opts = {});

/// Phi_u(t_end) as a DiffeoField evaluated by integrating from each query point.
/// The certificate is the minimum det W^1 over flows from the points of
/// `grid` (default: SampleGrid::over(u.support())).
DiffeoField flow_diffeo(const TimeField& u, int order, const FlowOptions& opts = {},
                        const std::optional<SampleGrid>& grid = std::nullopt);

/// Cumulative integrals int_0^t sup_x ||d^level u(s, x)|| ds at the step
/// boundaries of plan_steps(u, steps), by composite Simpson with four
/// subintervals per step. Separable fields use sum_i |coef_i(s)| sup ||d^level f_i||,
/// which is exact for a single term; other fields are sampled on `grid`.
std::vector<double> norm_integrals(const TimeField& u, int level, int steps,
                                   const std::optional<SampleGrid>& grid = std::nullopt, double t_end = 1.0);

struct GronwallRow {
  double t = 0.0;
  double displacement = 0.0;   // max_x |Phi(t, x) - x|
  double bound_a = 0.0;        // int_0^t ||u(s)||_0 ds
  double jacobian = 0.0;       // max_x ||W^1(t, x)||
  double bound_b = 0.0;        // exp(int_0^t sup ||du(s)|| ds)
  double margin_a = 0.0;       // bound_a + tol_a - displacement
  double margin_b = 0.0;
};

struct GronwallReport {
  std::vector<GronwallRow> rows;
  bool pass = true;
};

/// Evaluates both monitors at every snapshot, with tolerance 1e-6 (1 + bound).
/// Monitor (b) is skipped (bound reported, jacobian 0) for order-0 trajectories.
GronwallReport gronwall_margins(const FlowTrajectory& traj, const TimeField& u,
                                const std::optional<SampleGrid>& grid = std::nullopt);
/// As gronwall_margins, throwing NumericalError(monitor_failure) on a violation.
GronwallReport gronwall_monitor(const FlowTrajectory& traj, const TimeField& u,
                                const std::optional<SampleGrid>& grid = std::nullopt);

/// CSV export: t, seed, position components, det W^1, monitor margins (when given).
void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj, const GronwallReport* monitors = nullptr);

/// ||Phi_u(1) - Phi_v(1)||_{n,alpha} with seeds = grid points.
double flowmap_distance(const TimeField& u, const TimeField& v, int n, double alpha, int steps,
                        const SampleGrid& grid, std::size_t pair_budget = kDefaultPairBudget);

/// int_0^1 ||w(t)||_{n,beta} dt for a separable field (sum over terms of
/// int |coef_i| * ||f_i||_{n,beta}, estimated on `grid`).
double l1_hoelder_norm(const TimeField& w, int n, double beta, const SampleGrid& grid, int steps = 256,
                       std::size_t pair_budget = kDefaultPairBudget);

struct ExponentRow {
  double eps = 0.0;
  double distance = 0.0;
  double perturbation = 0.0;  // ||eps w||_{L1(C^{n,beta})}
  double ratio = 0.0;         // distance / perturbation^{beta - alpha}
};

struct ExponentReport {
  std::vector<ExponentRow> rows;
  /// Least-squares slope of log distance against log perturbation; NaN when
  /// fewer than two rows have positive distance.
  double slope = 0.0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
};

ExponentReport flowmap_exponent(const TimeField& u, const TimeField& w, std::span<const double> eps_list, int n,
                                double alpha, double beta, int steps, const SampleGrid& grid,
                                std::size_t pair_budget = kDefaultPairBudget);

double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace holoflow
