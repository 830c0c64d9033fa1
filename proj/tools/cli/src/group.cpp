// compose-bound, invert, inv-holder, matrix-bound

#include <algorithm>
#include <cmath>
#include <limits>

#include "command.hpp"
#include "holoflow/cli/zoo.hpp"
#include "holoflow/group.hpp"

namespace holoflow::cli {

namespace {

int run_compose_bound(const Params& p, Io& io) {
  const SampleGrid grid = make_grid(p, Box::cube(p.d, -10.0, 10.0), p.d == 1 ? 401 : p.d == 2 ? 61 : 21);
  Rng rng(p.seed);
  CsvTable table{{"pair", "f", "g", "lhs", "g_norm", "f_norm", "rhs", "pass"}, {}};
  Verdict v("compose-bound");
  double worst = 0.0;
  for (int i = 0; i < p.count; ++i) {
    const Mixture f = random_mixture(rng, p.d, 1, 3, 0.5, 0.3, 1.2);
    const Mixture g = random_mixture(rng, p.d, 1, 3, 1.0, 0.3, 1.2);
    const CompositionBoundReport r = composition_bound(f.field, g.field, p.alpha, grid, p.pairs);
    table.add_row({std::to_string(i), f.label, g.label, fmt(r.lhs), fmt(r.g_norm), fmt(r.f_norm), fmt(r.rhs),
                   r.pass ? "1" : "0"});
    v.require(r.pass, "row " + std::to_string(i) + ": lhs " + fmt(r.lhs) + " > rhs " + fmt(r.rhs));
    if (r.rhs > 0.0) worst = std::max(worst, r.lhs / r.rhs);
  }
  table.write(io.csv);
  return v.finish(io.err, std::to_string(p.count) + " pairs, max lhs/rhs = " + fmt(worst));
}

int run_invert(const Params& p, Io& io) {
  if (p.n < 0 || p.n > 5) throw std::invalid_argument("--n must lie in 0..5 (0 cycles 1..3)");
  const SampleGrid grid = make_grid(p, Box::cube(p.d, -7.5, 7.5), p.d == 1 ? 801 : p.d == 2 ? 61 : 21);
  Rng rng(p.seed);
  CsvTable table{{"trial", "n", "phi", "min_det", "inverse_min_det", "err_c0", "err_cn", "pass"}, {}};
  Verdict v("invert");
  double worst0 = 0.0, worstn = 0.0;
  for (int i = 0; i < p.count; ++i) {
    const int n = p.n > 0 ? p.n : 1 + i % 3;
    const Mixture mix = random_mixture(rng, p.d, n, 2, 0.1, 0.5, 1.0);
    const DiffeoField phi = DiffeoField::certify(mix.field, grid);
    const DiffeoField inv = invert(phi);
    const JetEvaluator residual = compose(phi, inv).phi();
    const double e0 = sup_norm(residual, 0, grid).value;
    const double en = ck_norm(JetSamples::evaluate(residual, grid, n), n).value;
    const bool pass = e0 <= 1e-9 && en <= 1e-6;
    worst0 = std::max(worst0, e0);
    worstn = std::max(worstn, en);
    table.add_row({std::to_string(i), std::to_string(n), mix.label, fmt(phi.min_det()), fmt(inv.min_det()), fmt(e0),
                   fmt(en), pass ? "1" : "0"});
    v.require(pass, "row " + std::to_string(i) + ": ||Phi o Phi^-1 - Id||_0 = " + fmt(e0) + ", C^" +
                        std::to_string(n) + " = " + fmt(en));
  }
  table.write(io.csv);
  return v.finish(io.err, std::to_string(p.count) + " diffeomorphisms, max C^0 error " + fmt(worst0) +
                              ", max C^n error " + fmt(worstn));
}

int run_inv_holder(const Params& p, Io& io) {
  if (!(p.alpha < p.beta)) throw std::invalid_argument("need alpha < beta");
  const JetEvaluator phi0 = parse_field(p.phi, p.d, p.n);
  const std::string w_spec = p.w.empty() ? "0.05*psi:" + std::to_string(p.n) + ":" + fmt(p.beta) : p.w;
  const JetEvaluator w = parse_field(w_spec, p.d, p.n);
  std::vector<double> eps = p.eps.empty() ? dyadic(1, 8) : parse_doubles(p.eps, "--eps");
  if (eps.size() < 4) throw std::invalid_argument("--eps needs at least four values");
  const SampleGrid grid = make_grid(p, phi0.support().hull(w.support()).enlarged(0.5), p.d == 1 ? 801 : 61);
  const ContinuityReport r = inversion_continuity_experiment(phi0, w, eps, p.n, p.alpha, p.beta, grid, p.pairs);

  CsvTable table{{"eps", "distance", "perturbation", "ratio"}, {}};
  Verdict v("inv-holder");
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    table.add_row({fmt(row.eps), fmt(row.distance), fmt(row.perturbation), fmt(row.ratio)});
    v.require(std::isfinite(row.ratio), "row " + std::to_string(i) + ": ratio is not finite");
  }
  std::vector<std::size_t> order(r.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.rows[a].eps < r.rows[b].eps; });
  double lo = r.rows[order[0]].ratio, hi = lo;
  for (std::size_t i = 1; i < 4; ++i) {
    lo = std::min(lo, r.rows[order[i]].ratio);
    hi = std::max(hi, r.rows[order[i]].ratio);
  }
  const double band = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  v.require(band < 10.0, "ratio varies by a factor " + fmt(band) + " >= 10 over the four smallest eps");
  table.write(io.csv);
  return v.finish(io.err, "max ratio " + fmt(r.max_ratio) + ", band over the four smallest eps " + fmt(band));
}

int run_matrix_bound(const Params& p, Io& io) {
  const std::vector<int> dims = parse_ints(p.d_list, "--dims");
  for (int d : dims) {
    if (d < 1 || d > 3) throw std::invalid_argument("--dims entries must be 1, 2 or 3");
  }
  Rng rng(p.seed);
  CsvTable table{{"d", "trial", "det", "lhs", "rhs", "pass"}, {}};
  Verdict v("matrix-bound");
  std::size_t violations = 0;
  for (int d : dims) {
    for (int i = 0; i < p.count; ++i) {
      std::vector<double> a(static_cast<std::size_t>(d * d));
      for (double& x : a) x = rng.uniform(-1.0, 1.0);
      const MatrixBoundReport r = inverse_matrix_bound(a, d);
      table.add_row({std::to_string(d), std::to_string(i), fmt(jacobian_det(a, d)), fmt(r.lhs), fmt(r.rhs),
                     r.pass ? "1" : "0"});
      if (!r.pass) ++violations;
      v.require(r.pass, "d=" + std::to_string(d) + " trial " + std::to_string(i) + ": lhs " + fmt(r.lhs) + " > rhs " +
                            fmt(r.rhs));
    }
  }
  table.write(io.csv);
  return v.finish(io.err, std::to_string(violations) + " violations in " +
                              std::to_string(static_cast<std::size_t>(p.count) * dims.size()) + " matrices");
}

}  // namespace

std::vector<Command> group_commands() {
  std::vector<Command> out;
  out.push_back({"compose-bound", "||g o (Id+f)||_{1,alpha} <= 2 ||g||_{1,alpha} (1 + ||f||_{1,alpha})^{1+alpha}",
                 kFlagAlpha | kFlagD | kFlagGrid | kFlagBox | kFlagPairs | kFlagSeed,
                 [](CLI::App& app, Params& p) {
                   p.count = 100;
                   app.add_option("--count", p.count, "random (f, g) pairs")->capture_default_str();
                 },
                 run_compose_bound});
  out.push_back({"invert", "round trip Phi o Phi^-1 = Id on random small diffeomorphisms",
                 kFlagD | kFlagGrid | kFlagBox | kFlagSeed,
                 [](CLI::App& app, Params& p) {
                   p.count = 20;
                   p.n = 0;
                   app.add_option("--count", p.count, "random diffeomorphisms")->capture_default_str();
                   app.add_option("--n", p.n, "jet order (0: cycle 1..3)")->capture_default_str();
                 },
                 run_invert});
  out.push_back({"inv-holder", "Hoelder continuity of inversion under a rough perturbation",
                 kFlagN | kFlagBeta | kFlagAlpha | kFlagD | kFlagGrid | kFlagBox | kFlagPairs,
                 [](CLI::App& app, Params& p) {
                   p.alpha = 0.3;
                   p.beta = 0.9;
                   p.phi = "gaussian:0.1";
                   app.add_option("--phi", p.phi, "base chart phi0")->capture_default_str();
                   app.add_option("--w", p.w, "perturbation (default 0.05*psi:n:beta)");
                   app.add_option("--eps", p.eps, "comma-separated eps (default 2^-1..2^-8)");
                 },
                 run_inv_holder});
  out.push_back({"matrix-bound", "||A^-1|| <= |det A|^-1 ||A||^{d-1} on random matrices", kFlagSeed,
                 [](CLI::App& app, Params& p) {
                   p.count = 1000;
                   p.d_list = "1,2,3";
                   app.add_option("--count", p.count, "matrices per dimension")->capture_default_str();
                   app.add_option("--dims", p.d_list, "dimensions")->capture_default_str();
                 },
                 run_matrix_bound});
  return out;
}

}  // namespace holoflow::cli
