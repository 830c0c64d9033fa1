// flow, gronwall, flowmap-exponent, trouve-roundtrip, polygon

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "command.hpp"
#include "holoflow/cli/zoo.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/trouve.hpp"

namespace holoflow::cli {

namespace {

std::vector<Point> lattice(int dim, double lo, double hi, int points) {
  return SampleGrid(Box::cube(dim, lo, hi), points).points();
}

double max_abs_diff(const Jet& a, const Jet& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double final_error(const FlowTrajectory& a, const FlowTrajectory& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.seeds.size(); ++i) m = std::max(m, max_abs_diff(a.final_state()[i], b.final_state()[i]));
  return m;
}

// ---------------------------------------------------------------- flow checks

double check_zero_identity() {
  const auto seeds = lattice(1, -2.0, 2.0, 9);
  double worst = 0.0;
  for (const TimeField& u : {TimeField::zero(1, 3), TimeField::autonomous(zero_field(1, 1, 3))}) {
    const auto traj = integrate_flow(u, seeds, 3, {16, 1, 1.0});
    for (const auto& snap : traj.states) {
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        worst = std::max(worst, max_abs_diff(snap[i], identity_jet(seeds[i], 3)));
      }
    }
  }
  return worst;
}

double check_plateau_closed_form() {
  // Seeds stay on the plateau of the cutoff, where u(t, x) = 0.3 (1 + t).
  const TimeField u = TimeField::modulated(plateau_shift(1, 3, {0.3}), [](double t) { return 1.0 + t; }, "1+t");
  const auto seeds = lattice(1, -1.0, 0.5, 11);
  const auto traj = integrate_flow(u, seeds, 3, {64, 8, 1.0});
  double worst = 0.0;
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const double t = traj.times[s];
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      Jet exact = identity_jet(seeds[i], 3);
      exact.value()[0] += 0.3 * (t + 0.5 * t * t);
      worst = std::max(worst, max_abs_diff(traj.states[s][i], exact));
    }
  }
  return worst;
}

TimeField smooth_test_field() {
  return TimeField::modulated(gaussian_field(1, 1, 2, 1.0, {0.2}, 0.8),
                              [](double t) { return 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * t); }, "1+sin");
}

double check_time_reversal() {
  const TimeField u = TimeField::modulated(gaussian_field(1, 1, 1, 0.5), [](double t) { return std::cos(3.0 * t); },
                                           "cos3t");
  const auto seeds = lattice(1, -3.0, 3.0, 17);
  const auto fwd = integrate_flow(u, seeds, 1, {2048, 0, 1.0});
  std::vector<Point> ends;
  for (const auto& j : fwd.final_state()) ends.emplace_back(j.value().begin(), j.value().end());
  const auto back = integrate_flow(reversed(u), ends, 1, {2048, 0, 1.0});
  double worst = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Jet round = jet_compose(back.final_state()[i], fwd.final_state()[i], 1);
    worst = std::max(worst, max_abs_diff(round, identity_jet(seeds[i], 1)));
  }
  return worst;
}

double check_rk4_order() {
  const TimeField u = smooth_test_field();
  const auto seeds = lattice(1, -1.5, 1.5, 7);
  const auto ref = integrate_flow(u, seeds, 2, {4096, 0, 1.0});
  std::vector<double> lh, le;
  for (int steps = 8; steps <= 128; steps *= 2) {
    const double e = final_error(integrate_flow(u, seeds, 2, {steps, 0, 1.0}), ref);
    lh.push_back(std::log(1.0 / steps));
    le.push_back(std::log(e));
  }
  return least_squares_slope(lh, le);
}

double check_breakpoint_semigroup() {
  const TimeField a = TimeField::autonomous(gaussian_field(1, 1, 2, 0.5));
  const TimeField b = TimeField::modulated(gaussian_field(1, 1, 2, -0.4, {0.5}), [](double t) { return t; }, "t");
  const TimeField u = TimeField::piecewise({0.5}, {a, b});
  const auto seeds = lattice(1, -2.0, 2.0, 9);
  const int steps = 256;
  const auto full = integrate_flow(u, seeds, 2, {steps, 0, 1.0});  // snapshots at 0, 0.5, 1
  // Second half on its own: v(t) = 0.5 u(0.5 + 0.5 t) over [0, 1].
  const TimeField v(1, 2, u.support(), {}, "second-half", [u](double t, std::size_t, std::span<const double> x, int ord) {
    Jet j = u(0.5 + 0.5 * t, 1, x, ord);
    j *= 0.5;
    return j;
  });
  std::vector<Point> mid;
  for (const auto& j : full.states.at(1)) mid.emplace_back(j.value().begin(), j.value().end());
  const auto second = integrate_flow(v, mid, 2, {steps / 2, 0, 1.0});
  double worst = 0.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const Jet chained = jet_compose(second.final_state()[i], full.states.at(1)[i], 2);
    worst = std::max(worst, max_abs_diff(chained, full.final_state()[i]));
  }
  return worst;
}

int run_flow_checks(Io& io) {
  CsvTable table{{"check", "value", "tolerance", "pass"}, {}};
  Verdict v("flow");
  auto record = [&](const std::string& name, double value, double tol, bool pass) {
    table.add_row({name, fmt(value), fmt(tol), pass ? "1" : "0"});
    v.require(pass, name + ": value " + fmt(value) + " outside tolerance " + fmt(tol));
  };
  const double zero = check_zero_identity();
  record("zero_identity", zero, 0.0, zero == 0.0);
  const double plateau = check_plateau_closed_form();
  record("plateau_closed_form", plateau, 1e-12, plateau <= 1e-12);
  const double rev = check_time_reversal();
  record("time_reversal", rev, 1e-6, rev <= 1e-6);
  const double order = check_rk4_order();
  record("rk4_order", order, 0.5, std::abs(order - 4.0) <= 0.5);
  const double semi = check_breakpoint_semigroup();
  record("breakpoint_semigroup", semi, 1e-10, semi <= 1e-10);
  table.write(io.csv);
  return v.finish(io.err, "zero " + fmt(zero) + ", plateau " + fmt(plateau) + ", reversal " + fmt(rev) + ", order " +
                              fmt(order) + ", semigroup " + fmt(semi));
}

int run_flow(const Params& p, Io& io) {
  if (p.checks == "all") return run_flow_checks(io);
  if (!p.checks.empty() && p.checks != "none") throw std::invalid_argument("--checks must be all or none");
  const TimeField u = TimeField::autonomous(parse_field(p.field, p.d, p.n));
  const SampleGrid seeds = make_grid(p, Box::cube(p.d, -2.0, 2.0), 9);
  const auto traj = integrate_flow(u, seeds.points(), p.n, {p.steps, p.stride, 1.0});
  const GronwallReport mon = gronwall_margins(traj, u);
  write_trajectory_csv(io.csv, traj, &mon);
  Verdict v("flow");
  for (std::size_t s = 0; s < mon.rows.size(); ++s) {
    const auto& r = mon.rows[s];
    v.require(r.margin_a >= 0.0 && r.margin_b >= 0.0,
              "snapshot " + std::to_string(s) + " (t=" + fmt(r.t) + "): Gronwall margins " + fmt(r.margin_a) + ", " +
                  fmt(r.margin_b));
  }
  if (p.field == "zero") {
    double worst = 0.0;
    for (const auto& snap : traj.states) {
      for (std::size_t i = 0; i < snap.size(); ++i) {
        worst = std::max(worst, max_abs_diff(snap[i], identity_jet(seeds.points()[i], p.n)));
      }
    }
    v.require(worst == 0.0, "zero field moved points by " + fmt(worst));
  }
  const auto& last = mon.rows.back();
  return v.finish(io.err, u.label() + ": " + std::to_string(traj.seeds.size()) + " seeds, max displacement " +
                              fmt(last.displacement) + ", monitors hold");
}

// ---------------------------------------------------------------- gronwall

struct GronwallCase {
  std::string name;
  TimeField u;
  std::vector<Point> seeds;
  int order;
  const char* equality;  // "a", "b" or nullptr
};

int run_gronwall(const Params& p, Io& io) {
  std::vector<GronwallCase> cases;
  const bool battery = p.checks == "all";
  if (battery) {
    const TimeField g = TimeField::autonomous(gaussian_field(1, 1, 2, 0.5));
    cases.push_back({"gaussian", g, lattice(1, -3.0, 3.0, 13), 2, nullptr});
    cases.push_back({"modulated",
                     TimeField::modulated(gaussian_field(1, 1, 2, 0.7, {0.3}), [](double t) { return std::cos(3.0 * t); },
                                          "cos3t"),
                     lattice(1, -3.0, 3.0, 13), 2, nullptr});
    cases.push_back({"piecewise", TimeField::piecewise({0.4}, {g, TimeField::autonomous(plateau_shift(1, 2, {-0.2}))}),
                     lattice(1, -3.0, 3.0, 13), 2, nullptr});
    cases.push_back({"gaussian_2d", TimeField::autonomous(gaussian_field(2, 2, 1, 0.4, {0.0, 0.0}, 1.0, {1.0, -0.5})),
                     lattice(2, -2.0, 2.0, 5), 1, nullptr});
    cases.push_back({"plateau_shift", TimeField::autonomous(plateau_shift(1, 2, {0.3})), lattice(1, -1.0, 0.5, 11), 2,
                     "a"});
    cases.push_back({"plateau_shift_2d", TimeField::autonomous(plateau_shift(2, 1, {0.2, -0.1})),
                     lattice(2, -0.5, 0.5, 5), 1, "a"});
    cases.push_back({"linear", TimeField::autonomous(linear_field(1, 2, 0.5)), lattice(1, -0.5, 0.5, 11), 2, "b"});
  } else if (p.checks.empty() || p.checks == "none") {
    cases.push_back({p.field, TimeField::autonomous(parse_field(p.field, p.d, p.n)),
                     make_grid(p, Box::cube(p.d, -2.0, 2.0), 9).points(), p.n, nullptr});
  } else {
    throw std::invalid_argument("--checks must be all or none");
  }

  const int steps = battery ? 256 : p.steps;
  const int stride = battery ? 32 : p.stride;
  Verdict v("gronwall");
  CsvTable detail{{"case", "t", "displacement", "bound_a", "jacobian", "bound_b", "margin_a", "margin_b"}, {}};
  CsvTable summary{{"case", "check", "observed", "bound", "slack", "pass"}, {}};
  for (const auto& c : cases) {
    const auto traj = integrate_flow(c.u, c.seeds, c.order, {steps, stride, 1.0});
    const GronwallReport rep = gronwall_margins(traj, c.u);
    double min_a = std::numeric_limits<double>::infinity(), min_b = min_a;
    for (std::size_t s = 0; s < rep.rows.size(); ++s) {
      const auto& r = rep.rows[s];
      detail.add_row({c.name, fmt(r.t), fmt(r.displacement), fmt(r.bound_a), fmt(r.jacobian), fmt(r.bound_b),
                      fmt(r.margin_a), fmt(r.margin_b)});
      min_a = std::min(min_a, r.margin_a);
      min_b = std::min(min_b, r.margin_b);
      v.require(r.margin_a >= 0.0 && r.margin_b >= 0.0, c.name + " snapshot " + std::to_string(s) + " (t=" + fmt(r.t) +
                                                            "): margins " + fmt(r.margin_a) + ", " + fmt(r.margin_b));
    }
    const auto& last = rep.rows.back();
    summary.add_row({c.name, "monitor_a", fmt(last.displacement), fmt(last.bound_a), fmt(min_a), min_a >= 0.0 ? "1" : "0"});
    summary.add_row({c.name, "monitor_b", fmt(last.jacobian), fmt(last.bound_b), fmt(min_b), min_b >= 0.0 ? "1" : "0"});
    if (c.equality) {
      const bool a = std::string(c.equality) == "a";
      double gap = 0.0;
      for (const auto& r : rep.rows) gap = std::max(gap, a ? std::abs(r.bound_a - r.displacement) : std::abs(r.bound_b - r.jacobian));
      const bool pass = gap <= 1e-10;
      summary.add_row({c.name, a ? "equality_a" : "equality_b", fmt(a ? last.displacement : last.jacobian),
                       fmt(a ? last.bound_a : last.bound_b), fmt(gap), pass ? "1" : "0"});
      v.require(pass, c.name + ": monitor (" + c.equality + ") is not attained, gap " + fmt(gap));
    }
  }
  (battery ? summary : detail).write(io.csv);
  return v.finish(io.err, std::to_string(cases.size()) + " case(s), monitors hold" +
                              (battery ? ", equality attained on plateau and linear fields" : ""));
}

// ---------------------------------------------------------------- flowmap-exponent

int run_flowmap_exponent(const Params& p, Io& io) {
  if (!(p.alpha < p.beta)) throw std::invalid_argument("need alpha < beta");
  const JetEvaluator base = parse_field(p.field, p.d, p.n);
  const std::string rough_spec = p.w.empty() ? "0.01*psi:" + std::to_string(p.n) + ":" + fmt(p.beta) : p.w;
  const JetEvaluator rough = parse_field(rough_spec, p.d, p.n);
  const std::vector<double> eps = p.eps.empty() ? dyadic(1, 8) : parse_doubles(p.eps, "--eps");
  Box box = base.support().hull(rough.support());
  std::optional<JetEvaluator> smooth;
  if (p.w_smooth != "none") {
    smooth = parse_field(p.w_smooth, p.d, p.n);
    box = box.hull(smooth->support());
  }
  const SampleGrid grid = make_grid(p, box.enlarged(0.5), p.d == 1 ? 201 : 41);
  const TimeField u = TimeField::autonomous(base);

  CsvTable table{{"perturbation", "eps", "distance", "l1_norm", "ratio"}, {}};
  Verdict v("flowmap-exponent");
  const ExponentReport r = flowmap_exponent(u, TimeField::autonomous(rough), eps, p.n, p.alpha, p.beta, p.steps, grid, p.pairs);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    table.add_row({"rough", fmt(row.eps), fmt(row.distance), fmt(row.perturbation), fmt(row.ratio)});
    v.require(std::isfinite(row.ratio) && row.ratio > 0.0, "rough row " + std::to_string(i) + ": ratio " + fmt(row.ratio));
  }
  const double band = r.min_ratio > 0.0 ? r.max_ratio / r.min_ratio : std::numeric_limits<double>::infinity();
  v.require(band < 10.0, "rough perturbation: ratio band " + fmt(band) + " >= 10");
  std::string summary = "rough band " + fmt(band) + " (slope " + fmt(r.slope) + ")";
  if (smooth) {
    const ExponentReport s =
        flowmap_exponent(u, TimeField::autonomous(*smooth), eps, p.n, p.alpha, p.beta, p.steps, grid, p.pairs);
    for (const auto& row : s.rows) {
      table.add_row({"smooth", fmt(row.eps), fmt(row.distance), fmt(row.perturbation), fmt(row.ratio)});
    }
    v.require(s.slope >= p.beta - p.alpha, "smooth perturbation: slope " + fmt(s.slope) + " < beta - alpha");
    summary += ", smooth slope " + fmt(s.slope);
  }
  table.write(io.csv);
  return v.finish(io.err, summary);
}

// ---------------------------------------------------------------- trouve / polygon

struct PolygonResult {
  std::vector<Point> seeds;
  std::vector<Jet> flowed;
  std::vector<Jet> expected;
  double error = 0.0;
};

PolygonResult polygon_run(const std::vector<double>& shifts, int d, int n, int steps, const std::vector<Point>& seeds) {
  if (shifts.empty()) throw std::invalid_argument("--shifts needs at least one value");
  std::vector<DiffeoField> vertices;
  for (double c : shifts) {
    const DiffeoField s = DiffeoField::certify(plateau_shift(d, n, std::vector<double>(static_cast<std::size_t>(d), c)));
    vertices.push_back(vertices.empty() ? s : compose(s, vertices.back()));
  }
  const TimeField u = polygon_field(vertices);
  const auto traj = integrate_flow(u, seeds, n, {steps, 0, 1.0});
  PolygonResult r;
  r.seeds = seeds;
  r.flowed = traj.final_state();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    r.expected.push_back(vertices.back().jet(seeds[i], n));
    r.error = std::max(r.error, max_abs_diff(r.flowed[i], r.expected[i]));
  }
  return r;
}

int run_trouve(const Params& p, Io& io) {
  const JetEvaluator phi = parse_field(p.phi, p.d, p.n);
  if (!phi.value_bound()) throw std::invalid_argument("--phi needs a field with a known value bound");
  const SampleGrid grid = make_grid(p, phi.support().enlarged(*phi.value_bound()), p.d == 1 ? 201 : 41);
  CsvTable table{{"case", "steps", "error", "tolerance", "pass"}, {}};
  Verdict v("trouve-roundtrip");
  const double err = roundtrip_error(phi, p.n, p.alpha, p.steps, grid, p.pairs);
  const bool pass = err <= p.tol;
  table.add_row({"segment:" + phi.label(), std::to_string(p.steps), fmt(err), fmt(p.tol), pass ? "1" : "0"});
  v.require(pass, "segment round trip error " + fmt(err) + " > " + fmt(p.tol));
  std::string summary = "||Phi_u(1) - (Id + phi)||_{" + std::to_string(p.n) + "," + brief(p.alpha) + "} = " + fmt(err);
  if (p.polygon_check) {
    const auto shifts = parse_doubles(p.shifts, "--shifts");
    const PolygonResult r = polygon_run(shifts, p.d, p.n, 256, lattice(p.d, -0.5, 0.5, p.d == 1 ? 11 : 5));
    const bool ok = r.error <= 1e-8;
    table.add_row({"polygon:" + join(shifts), "256", fmt(r.error), fmt(1e-8), ok ? "1" : "0"});
    v.require(ok, "polygon error " + fmt(r.error) + " > 1e-8");
    summary += ", polygon error " + fmt(r.error);
  }
  table.write(io.csv);
  return v.finish(io.err, summary);
}

int run_polygon(const Params& p, Io& io) {
  const auto shifts = parse_doubles(p.shifts, "--shifts");
  const SampleGrid seeds = make_grid(p, Box::cube(p.d, -0.5, 0.5), p.d == 1 ? 11 : 5);
  const PolygonResult r = polygon_run(shifts, p.d, p.n, p.steps, seeds.points());
  std::vector<std::string> header = {"seed"};
  for (int c = 0; c < p.d; ++c) header.push_back("x" + std::to_string(c));
  for (int c = 0; c < p.d; ++c) header.push_back("flow" + std::to_string(c));
  for (int c = 0; c < p.d; ++c) header.push_back("expected" + std::to_string(c));
  header.push_back("jet_error");
  CsvTable table{header, {}};
  Verdict v("polygon");
  for (std::size_t i = 0; i < r.seeds.size(); ++i) {
    std::vector<std::string> row = {std::to_string(i)};
    for (double x : r.seeds[i]) row.push_back(fmt(x));
    for (double x : r.flowed[i].value()) row.push_back(fmt(x));
    for (double x : r.expected[i].value()) row.push_back(fmt(x));
    const double e = max_abs_diff(r.flowed[i], r.expected[i]);
    row.push_back(fmt(e));
    table.add_row(std::move(row));
    v.require(e <= p.tol, "seed " + std::to_string(i) + ": jet error " + fmt(e) + " > " + fmt(p.tol));
  }
  table.write(io.csv);
  return v.finish(io.err, std::to_string(shifts.size()) + " vertices, max jet error " + fmt(r.error));
}

}  // namespace

std::vector<Command> flow_commands() {
  std::vector<Command> out;
  out.push_back({"flow", "RK4 flow of a zoo field with Gronwall monitors; --checks all runs the correctness battery",
                 kFlagN | kFlagD | kFlagGrid | kFlagBox | kFlagSteps,
                 [](CLI::App& app, Params& p) {
                   p.field = "gaussian:0.5";
                   app.add_option("--field", p.field, "autonomous zoo field")->capture_default_str();
                   app.add_option("--stride", p.stride, "snapshot every k steps (0: end only)")->capture_default_str();
                   app.add_option("--checks", p.checks, "all: zero, plateau, reversal, order and semigroup checks");
                 },
                 run_flow});
  out.push_back({"gronwall", "displacement and variational Gronwall monitors along a flow",
                 kFlagN | kFlagD | kFlagGrid | kFlagBox | kFlagSteps,
                 [](CLI::App& app, Params& p) {
                   p.field = "gaussian:0.5";
                   p.stride = 16;
                   app.add_option("--field", p.field, "autonomous zoo field")->capture_default_str();
                   app.add_option("--stride", p.stride, "snapshot every k steps")->capture_default_str();
                   app.add_option("--checks", p.checks, "all: monitor battery with equality cases");
                 },
                 run_gronwall});
  out.push_back({"flowmap-exponent", "Hoelder continuity of u -> Phi_u(1) under rough and smooth perturbations",
                 kFlagN | kFlagBeta | kFlagAlpha | kFlagD | kFlagGrid | kFlagBox | kFlagPairs | kFlagSteps,
                 [](CLI::App& app, Params& p) {
                   p.n = 2;
                   p.alpha = 0.3;
                   p.beta = 0.9;
                   p.field = "gaussian:0.3";
                   p.w_smooth = "gaussian:0.1:0.5";
                   app.add_option("--field", p.field, "base field u")->capture_default_str();
                   app.add_option("--w", p.w, "rough perturbation (default 0.01*psi:n:beta)");
                   app.add_option("--w-smooth", p.w_smooth, "smooth perturbation, or none")->capture_default_str();
                   app.add_option("--eps", p.eps, "comma-separated decreasing eps (default 2^-1..2^-8)");
                 },
                 run_flowmap_exponent});
  out.push_back({"trouve-roundtrip", "flow of the segment field of phi reproduces Id + phi",
                 kFlagN | kFlagAlpha | kFlagD | kFlagGrid | kFlagBox | kFlagPairs | kFlagSteps,
                 [](CLI::App& app, Params& p) {
                   p.alpha = 0.3;
                   p.steps = 4096;
                   p.tol = 1e-4;
                   p.phi = "gaussian:0.1";
                   p.shifts = "0.05,0.03";
                   app.add_option("--phi", p.phi, "target chart")->capture_default_str();
                   app.add_option("--tol", p.tol, "round trip tolerance")->capture_default_str();
                   app.add_flag("--polygon-check", p.polygon_check, "also run the two-shift polygon");
                   app.add_option("--shifts", p.shifts, "polygon shifts")->capture_default_str();
                 },
                 run_trouve});
  out.push_back({"polygon", "piecewise segment field through composed plateau shifts",
                 kFlagN | kFlagD | kFlagGrid | kFlagBox | kFlagSteps,
                 [](CLI::App& app, Params& p) {
                   p.shifts = "0.05,0.03";
                   p.tol = 1e-8;
                   app.add_option("--shifts", p.shifts, "shift of each vertex step")->capture_default_str();
                   app.add_option("--tol", p.tol, "jet tolerance")->capture_default_str();
                 },
                 run_polygon});
  return out;
}

}  // namespace holoflow::cli
