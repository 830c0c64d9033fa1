// disc, optimal, separability

#include <cmath>

#include "command.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/pathology.hpp"

namespace holoflow::cli {

namespace {

int run_disc(const Params& p, Io& io) {
  const std::vector<double> ks = parse_doubles(p.k, "--k");
  DiscOptions opts;
  if (p.grid > 0) opts.points_per_axis = p.grid;
  opts.pair_budget = p.pairs;
  const auto rows = disc_experiment(p.n, p.beta, ks, opts);
  CsvTable table{{"k", "diffeomorphism", "chart_norm", "scaled_norm", "witness", "seminorm", "threshold", "pass"}, {}};
  Verdict v("disc");
  std::vector<double> lk, ln;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    table.add_row({fmt(r.k), r.diffeomorphism ? "1" : "0", fmt(r.chart_norm), fmt(r.scaled_norm), fmt(r.witness),
                   fmt(r.seminorm), fmt(r.threshold), r.pass ? "1" : "0"});
    const std::string id = "row " + std::to_string(i) + " (k=" + fmt(r.k) + "): ";
    v.require(r.diffeomorphism, id + "Id + chi/k is not certified");
    v.require(r.pass, id + "witness " + fmt(r.witness) + " < 2C = " + fmt(r.threshold));
    v.require(std::abs(r.chart_norm - r.scaled_norm) <= 1e-9 * r.scaled_norm,
              id + "chart norm " + fmt(r.chart_norm) + " differs from ||chi||/k = " + fmt(r.scaled_norm));
    if (r.chart_norm > 0.0) {
      lk.push_back(std::log(r.k));
      ln.push_back(std::log(r.chart_norm));
    }
  }
  std::string summary = std::to_string(rows.size()) + " rows";
  if (rows.size() >= 2) {
    const double slope = least_squares_slope(lk, ln);
    v.require(std::abs(slope + 1.0) <= 0.01, "log-log slope of the chart norm " + fmt(slope) + " is not -1 +- 0.01");
    summary += ", chart norm slope " + fmt(slope);
  }
  table.write(io.csv);
  return v.finish(io.err, summary + ", threshold 2C = " + fmt(2.0 * psi_constant(p.n, p.beta)));
}

int run_optimal(const Params& p, Io& io) {
  const std::vector<double> s = p.s.empty() ? dyadic(4, 12) : parse_doubles(p.s, "--s");
  const OptimalReport r = optimal_experiment(p.n, p.beta, p.alpha, p.gamma, s);
  CsvTable table{{"s", "q", "closed_form", "rel_error"}, {}};
  Verdict v("optimal");
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    table.add_row({fmt(row.s), fmt(row.q), fmt(row.closed_form), fmt(row.rel_error)});
    v.require(row.rel_error <= 1e-10, "row " + std::to_string(i) + " (s=" + fmt(row.s) + "): relative error " +
                                          fmt(row.rel_error) + " > 1e-10");
  }
  if (r.rows.size() >= 2) {
    v.require(std::abs(r.slope - r.expected_slope) <= 0.01,
              "slope " + fmt(r.slope) + " differs from beta - alpha - gamma = " + fmt(r.expected_slope));
  }
  table.write(io.csv);
  return v.finish(io.err, "slope " + fmt(r.slope) + " (expected " + fmt(r.expected_slope) + "), max relative error " +
                              fmt(r.max_rel_error));
}

int run_separability(const Params& p, Io& io) {
  const std::vector<int> ns = parse_ints(p.n_list, "--n");
  const std::vector<double> betas = parse_doubles(p.beta_list, "--beta");
  const std::vector<double> ts = parse_doubles(p.t, "--t");
  for (int n : ns) {
    if (n < 1 || n > 5) throw std::invalid_argument("--n entries must lie in 1..5");
  }
  for (double b : betas) {
    if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("--beta entries must lie in (0, 1]");
  }
  CsvTable table{{"n", "beta", "t", "s", "quotient", "threshold", "pass"}, {}};
  Verdict v("separability");
  std::string summary;
  for (int n : ns) {
    for (double b : betas) {
      const SeparabilityReport r = separability_gap(n, b, ts);
      for (const auto& row : r.rows) {
        table.add_row({std::to_string(n), fmt(b), fmt(row.t), fmt(row.s), fmt(row.quotient), fmt(row.threshold),
                       row.pass ? "1" : "0"});
        v.require(row.pass, "n=" + std::to_string(n) + " beta=" + fmt(b) + " pair (" + fmt(row.t) + ", " + fmt(row.s) +
                                "): quotient " + fmt(row.quotient) + " < " + fmt(row.threshold));
      }
      summary += (summary.empty() ? "" : ", ") + std::string("min quotient ") + fmt(r.min_quotient) + " (n=" +
                 std::to_string(n) + ", beta=" + fmt(b) + ")";
    }
  }
  table.write(io.csv);
  return v.finish(io.err, summary);
}

}  // namespace

std::vector<Command> pathology_commands() {
  std::vector<Command> out;
  out.push_back({"disc", "left translation by psi is discontinuous: witness pair stays 2C away",
                 kFlagN | kFlagBeta | kFlagGrid | kFlagPairs,
                 [](CLI::App& app, Params& p) {
                   p.k = "10,100,1000,10000";
                   app.add_option("--k", p.k, "comma-separated k")->capture_default_str();
                 },
                 run_disc});
  out.push_back({"optimal", "optimality of the exponent: Q(s) against 2C s^{beta-alpha-gamma}",
                 kFlagN | kFlagBeta | kFlagAlpha | kFlagGamma,
                 [](CLI::App& app, Params& p) {
                   p.beta = 0.9;
                   p.alpha = 0.3;
                   p.gamma = 0.7;
                   app.add_option("--s", p.s, "comma-separated s (default 2^-4..2^-12)");
                 },
                 run_optimal});
  out.push_back({"separability", "pairwise gaps between translates of psi", 0,
                 [](CLI::App& app, Params& p) {
                   p.n_list = "1,2";
                   p.beta_list = "0.5,1";
                   p.t = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
                   app.add_option("--n", p.n_list, "comma-separated orders")->capture_default_str();
                   app.add_option("--beta", p.beta_list, "comma-separated exponents")->capture_default_str();
                   app.add_option("--t", p.t, "comma-separated translations")->capture_default_str();
                 },
                 run_separability});
  return out;
}

}  // namespace holoflow::cli
