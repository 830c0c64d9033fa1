// norms, interpolation, inclusion, modulus, jets

#include <algorithm>
#include <cmath>
#include <limits>

#include "command.hpp"
#include "holoflow/cli/zoo.hpp"
#include "holoflow/oracle/symbolic.hpp"

namespace holoflow::cli {

namespace {

int run_norms(const Params& p, Io& io) {
  const JetEvaluator f = parse_field(p.field, p.d, p.n);
  const SampleGrid grid = make_grid(p, f.support(), SampleGrid::default_points_per_axis(p.d));
  const JetSamples samples = JetSamples::evaluate(f, grid, p.n);
  CsvTable table{norm_csv_header(p.d), {}};
  Verdict v("norms");
  double largest = 0.0;
  for (int l = 0; l <= p.n; ++l) {
    const NormEstimate e = sup_norm(samples, l);
    largest = std::max(largest, e.value);
    table.add_row(norm_csv_row(e, p.d));
  }
  const NormEstimate semi = hoelder_seminorm(samples, p.n, p.alpha, p.pairs);
  largest = std::max(largest, semi.value);
  table.add_row(norm_csv_row(semi, p.d));
  const NormEstimate full = hoelder_norm(samples, p.n, p.alpha, p.pairs);
  table.add_row(norm_csv_row(full, p.d));
  table.write(io.csv);
  v.require(std::isfinite(full.value), "norm is not finite");
  v.require(full.value == largest, "full norm " + fmt(full.value) + " differs from the largest component " + fmt(largest));
  return v.finish(io.err, f.label() + ": ||f||_{" + std::to_string(p.n) + "," + brief(p.alpha) + "} = " + fmt(full.value));
}

int interpolation_points(int d) { return d == 1 ? 401 : d == 2 ? 61 : 21; }

int run_interpolation(const Params& p, Io& io) {
  const SampleGrid grid = make_grid(p, Box::cube(p.d, -7.0, 7.0), interpolation_points(p.d));
  Rng rng(p.seed);
  CsvTable table{{"field", "trial", "low", "mid", "high", "mu", "lhs", "rhs", "pass"}, {}};
  Verdict v("interpolation");
  std::size_t rows = 0;
  double worst = 0.0;
  for (int i = 0; i < p.count; ++i) {
    const Mixture mix = random_mixture(rng, p.d, p.n, 3, 1.0, 0.3, 1.0);
    const JetSamples samples = JetSamples::evaluate(mix.field, grid, p.n);
    for (int j = 0; j < p.trials; ++j) {
      double e[3];
      do {
        for (double& x : e) x = rng.uniform(0.01, 1.0);
        std::sort(e, e + 3);
      } while (!(e[0] < e[1] && e[1] < e[2]));
      const InterpolationReport r = verify_interpolation(samples, p.n, e[0], e[1], e[2], p.pairs);
      table.add_row({mix.label, std::to_string(j), fmt(e[0]), fmt(e[1]), fmt(e[2]), fmt(r.mu), fmt(r.lhs), fmt(r.rhs),
                     r.pass ? "1" : "0"});
      v.require(r.pass, "row " + std::to_string(rows) + " (field " + std::to_string(i) + ", trial " + std::to_string(j) +
                            "): lhs " + fmt(r.lhs) + " > rhs " + fmt(r.rhs));
      if (r.rhs > 0.0) worst = std::max(worst, r.lhs / r.rhs);
      ++rows;
    }
  }
  table.write(io.csv);
  return v.finish(io.err, std::to_string(rows) + " cases, max lhs/rhs = " + fmt(worst));
}

int run_inclusion(const Params& p, Io& io) {
  if (p.m < 0 || p.m > p.n) throw std::invalid_argument("need 0 <= m <= n");
  if (!(p.m + p.alpha <= p.n + p.beta)) throw std::invalid_argument("need m + alpha <= n + beta");
  std::vector<Mixture> fields;
  if (!p.field.empty()) {
    const JetEvaluator f = parse_field(p.field, p.d, p.n);
    fields.push_back({f, f.label()});
  }
  Rng rng(p.seed);
  for (int i = 0; i < p.count; ++i) fields.push_back(random_mixture(rng, p.d, p.n, 3, 1.0, 0.3, 1.0));
  if (fields.empty()) throw std::invalid_argument("nothing to check: give --field or --count");
  CsvTable table{{"field", "m", "alpha", "n", "beta", "lhs", "rhs", "pass"}, {}};
  Verdict v("inclusion");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    Box box = fields[i].field.support();
    for (const auto& other : fields) box = box.hull(other.field.support());
    const SampleGrid grid = make_grid(p, box, interpolation_points(p.d));
    const InclusionReport r = verify_inclusion(fields[i].field, p.m, p.alpha, p.n, p.beta, grid, p.pairs);
    table.add_row({fields[i].label, std::to_string(p.m), fmt(p.alpha), std::to_string(p.n), fmt(p.beta), fmt(r.lhs),
                   fmt(r.rhs), r.pass ? "1" : "0"});
    v.require(r.pass, "row " + std::to_string(i) + ": lhs " + fmt(r.lhs) + " > 2 rhs = " + fmt(2.0 * r.rhs));
  }
  table.write(io.csv);
  return v.finish(io.err, std::to_string(fields.size()) + " field(s)");
}

// ---------------------------------------------------------------- modulus

Modulus parse_modulus(const std::string& spec) {
  if (spec == "inverse-log") return Modulus::inverse_log();
  if (spec.rfind("power:", 0) == 0) {
    const auto e = parse_doubles(spec.substr(6), "--modulus");
    if (e.size() != 1 || !(e[0] > 0.0 && e[0] <= 1.0)) throw std::invalid_argument("--modulus power:p needs p in (0, 1]");
    return Modulus::power(e[0]);
  }
  throw std::invalid_argument("--modulus: expected inverse-log or power:p, got '" + spec + "'");
}

std::vector<double> modulus_samples(const std::string& range) {
  const auto colon = range.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--k-range: expected first:last");
  const auto a = parse_ints(range.substr(0, colon), "--k-range");
  const auto b = parse_ints(range.substr(colon + 1), "--k-range");
  if (a.size() != 1 || b.size() != 1 || a[0] < 2 || b[0] <= a[0] || b[0] > 1000) {
    throw std::invalid_argument("--k-range needs 2 <= first < last <= 1000");
  }
  return dyadic(a[0], b[0]);
}

int run_modulus(const Params& p, Io& io) {
  struct Case {
    std::string modulus;
    std::vector<double> gammas;
    bool expect_pass;
  };
  std::vector<Case> cases;
  if (p.checks == "all") {
    cases.push_back({"inverse-log", {0.05, 0.1, 0.5, 1.0}, true});
    cases.push_back({"power:0.5", {0.25}, false});
  } else if (p.checks.empty() || p.checks == "none") {
    if (p.expect != "pass" && p.expect != "fail") throw std::invalid_argument("--expect must be pass or fail");
    cases.push_back({p.modulus, parse_doubles(p.gammas, "--gammas"), p.expect == "pass"});
  } else {
    throw std::invalid_argument("--checks must be all or none");
  }
  const std::vector<double> t = modulus_samples(p.k_range);
  CsvTable table{{"modulus", "gamma", "min_ratio", "final_ratio", "tail_nondecreasing", "pass", "expected"}, {}};
  Verdict v("modulus");
  std::size_t row = 0;
  for (const auto& c : cases) {
    const Modulus omega = parse_modulus(c.modulus);
    for (double g : c.gammas) {
      if (!(g > 0.0)) throw std::invalid_argument("--gammas must be positive");
    }
    const ModulusValidation ok = validate_modulus(omega, t);
    v.require(ok.zero_at_origin && ok.nondecreasing && ok.subadditive,
              c.modulus + " is not a modulus of continuity on the samples");
    for (const auto& r : modulus_check(omega, c.gammas, t)) {
      table.add_row({omega.name, fmt(r.gamma), fmt(r.min_ratio), fmt(r.final_ratio), r.tail_nondecreasing ? "1" : "0",
                     r.pass ? "1" : "0", c.expect_pass ? "pass" : "fail"});
      v.require(r.pass == c.expect_pass, "row " + std::to_string(row) + " (" + omega.name + ", gamma " + fmt(r.gamma) +
                                             "): expected " + (c.expect_pass ? "pass" : "fail"));
      ++row;
    }
  }
  table.write(io.csv);
  return v.finish(io.err, std::to_string(row) + " exponent(s) behave as expected");
}

// ---------------------------------------------------------------- jets

using oracle::ExprPtr;

Jet oracle_jet(const std::vector<ExprPtr>& comps, int dim, int order, std::span<const double> x) {
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

struct JetCase {
  std::string kind;
  int dim = 1;
  std::vector<std::vector<ExprPtr>> maps;  // maps[0] applied first
  ExprPtr composed;

  /// Engine jet of the case at x, fed only with oracle jets of the pieces.
  Jet engine(std::span<const double> x, int order) const {
    if (kind == "product") {
      const Jet a = oracle_jet({maps[0][0]}, dim, order, x);
      const Jet b = oracle_jet({maps[1][0]}, dim, order, x);
      return jet_bilinear(BilinearMap::scalar_product(), a, b, order);
    }
    Jet acc = oracle_jet(maps[0], dim, order, x);
    for (std::size_t i = 1; i < maps.size(); ++i) {
      const Jet outer = oracle_jet(maps[i], acc.dim_out(), order, acc.value());
      acc = jet_compose(outer, acc, order);
    }
    return acc;
  }
};

std::vector<ExprPtr> random_map(oracle::ExprGenerator& gen, int dim_in, int dim_out) {
  std::vector<ExprPtr> comps;
  for (int o = 0; o < dim_out; ++o) comps.push_back(gen.generate(dim_in, 2));
  return comps;
}

JetCase random_case(oracle::ExprGenerator& gen, int dim, int variant) {
  JetCase c;
  c.dim = dim;
  if (variant == 0) {
    c.kind = "compose";
    const int mid = 1 + gen.pick(2);
    c.maps = {random_map(gen, dim, mid), random_map(gen, mid, 1)};
  } else if (variant == 1) {
    c.kind = "product";
    c.maps = {random_map(gen, dim, 1), random_map(gen, dim, 1)};
    c.composed = oracle::mul(c.maps[0][0], c.maps[1][0]);
    return c;
  } else {
    c.kind = "chain";
    c.maps = {random_map(gen, dim, dim), random_map(gen, dim, dim), random_map(gen, dim, 1)};
  }
  ExprPtr e = c.maps.back()[0];
  for (std::size_t i = c.maps.size() - 1; i-- > 0;) e = oracle::substitute(e, c.maps[i]);
  c.composed = e;
  return c;
}

int run_jets(const Params& p, Io& io) {
  const std::vector<int> dims = parse_ints(p.d_list, "--dims");
  for (int d : dims) {
    if (d < 1 || d > 3) throw std::invalid_argument("--dims entries must be 1, 2 or 3");
  }
  oracle::ExprGenerator gen(p.seed);
  CsvTable table{{"trial", "d", "kind", "order", "expression", "rel_error", "fd_error", "pass"}, {}};
  Verdict v("jets");
  double worst = 0.0, worst_fd = 0.0;
  for (int trial = 0; trial < p.count; ++trial) {
    const int d = dims[static_cast<std::size_t>(trial) % dims.size()];
    const int order = 1 + trial % p.n;
    const JetCase c = random_case(gen, d, trial % 3);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (double& xi : x) xi = gen.unit();

    const Jet mine = c.engine(x, order);
    const Jet ref = oracle_jet({c.composed}, d, order, x);
    double diff = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < ref.data().size(); ++i) {
      diff = std::max(diff, std::abs(mine.data()[i] - ref.data()[i]));
      scale = std::max(scale, std::abs(ref.data()[i]));
    }
    const double rel = diff / scale;

    // d/dx_i of block order-1, fourth-order stencil, against block `order`.
    constexpr double h = 1e-2;
    const auto top = mine.block(order);
    const std::size_t below = top.size() / static_cast<std::size_t>(d);
    double fd_diff = 0.0, fd_scale = 1.0;
    for (int i = 0; i < d; ++i) {
      std::vector<double> blocks[4];
      const double offsets[4] = {h, -h, 2 * h, -2 * h};
      for (int s = 0; s < 4; ++s) {
        std::vector<double> y = x;
        y[static_cast<std::size_t>(i)] += offsets[s];
        const Jet jy = c.engine(y, order - 1);
        blocks[s].assign(jy.block(order - 1).begin(), jy.block(order - 1).end());
      }
      for (std::size_t e = 0; e < below; ++e) {
        const double fd = (8.0 * (blocks[0][e] - blocks[1][e]) - (blocks[2][e] - blocks[3][e])) / (12.0 * h);
        const double exact = top[e * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)];
        fd_diff = std::max(fd_diff, std::abs(fd - exact));
        fd_scale = std::max(fd_scale, std::abs(exact));
      }
    }
    const double fd_rel = fd_diff / fd_scale;
    const bool pass = rel <= 1e-10 && fd_rel <= 1e-5;
    worst = std::max(worst, rel);
    worst_fd = std::max(worst_fd, fd_rel);
    table.add_row({std::to_string(trial), std::to_string(d), c.kind, std::to_string(order),
                   oracle::to_string(c.composed), fmt(rel), fmt(fd_rel), pass ? "1" : "0"});
    v.require(pass, "row " + std::to_string(trial) + " (" + c.kind + ", d=" + std::to_string(d) + ", order " +
                        std::to_string(order) + "): symbolic " + fmt(rel) + ", finite difference " + fmt(fd_rel));
  }
  table.write(io.csv);
  return v.finish(io.err, std::to_string(p.count) + " cases, max rel error " + fmt(worst) + ", max fd error " +
                              fmt(worst_fd));
}

}  // namespace

std::vector<Command> analysis_commands() {
  std::vector<Command> out;
  out.push_back({"norms", "sampled C^k and Hoelder norms of a zoo field with witnesses",
                 kFlagN | kFlagAlpha | kFlagD | kFlagGrid | kFlagBox | kFlagPairs,
                 [](CLI::App& app, Params& p) {
                   p.field = "gaussian:1";
                   app.add_option("--field", p.field, "zoo field")->capture_default_str();
                 },
                 run_norms});
  out.push_back({"interpolation", "matched-sample interpolation inequality on random bump mixtures",
                 kFlagN | kFlagD | kFlagGrid | kFlagBox | kFlagPairs | kFlagSeed,
                 [](CLI::App& app, Params& p) {
                   p.count = 100;
                   p.trials = 10;
                   app.add_option("--count", p.count, "number of random fields")->capture_default_str();
                   app.add_option("--trials", p.trials, "exponent triples per field")->capture_default_str();
                 },
                 run_interpolation});
  Command inclusion{"inclusion", "||f||_{m,alpha} <= 2 ||f||_{n,beta} for m + alpha <= n + beta",
                    kFlagN | kFlagBeta | kFlagAlpha | kFlagD | kFlagGrid | kFlagBox | kFlagPairs | kFlagSeed,
                    [](CLI::App& app, Params& p) {
                      p.field = "gaussian:1";
                      app.add_option("--field", p.field, "zoo field (empty: random fields only)")->capture_default_str();
                      app.add_option("--m", p.m, "lower derivative order")->capture_default_str();
                      app.add_option("--count", p.count, "additional random fields")->capture_default_str();
                    },
                    run_inclusion};
  inclusion.alpha_below_beta = false;
  out.push_back(std::move(inclusion));
  out.push_back({"modulus", "slowly vanishing modulus check omega(t) / t^gamma", 0,
                 [](CLI::App& app, Params& p) {
                   p.modulus = "inverse-log";
                   p.gammas = "0.05,0.1,0.5,1";
                   p.expect = "pass";
                   p.k_range = "8:160";
                   app.add_option("--modulus", p.modulus, "inverse-log or power:p")->capture_default_str();
                   app.add_option("--gammas", p.gammas, "comma-separated exponents")->capture_default_str();
                   app.add_option("--expect", p.expect, "pass or fail")->capture_default_str();
                   app.add_option("--k-range", p.k_range, "samples t = 2^-k for k in first:last")->capture_default_str();
                   app.add_option("--checks", p.checks, "all: run the built-in pass and fail cases");
                 },
                 run_modulus});
  out.push_back({"jets", "jet engine against an independent symbolic oracle", kFlagSeed,
                 [](CLI::App& app, Params& p) {
                   p.count = 120;
                   p.n = 4;
                   p.d_list = "1,2";
                   app.add_option("--count", p.count, "random cases")->capture_default_str();
                   app.add_option("--n", p.n, "maximum order; orders cycle 1..n")
                       ->check(CLI::Range(1, 5))
                       ->capture_default_str();
                   app.add_option("--dims", p.d_list, "dimensions to cycle through")->capture_default_str();
                 },
                 run_jets});
  return out;
}

}  // namespace holoflow::cli
