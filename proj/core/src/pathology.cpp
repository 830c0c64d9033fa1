#include "holoflow/pathology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "holoflow/error.hpp"
#include "holoflow/flow.hpp"
#include "holoflow/group.hpp"

namespace holoflow {

namespace {

double max_cutoff_slope(const Cutoff& c) {
  double m = 0.0;
  constexpr int kSamples = 20001;
  for (int i = 0; i < kSamples; ++i) {
    const double x = c.inner + (c.outer - c.inner) * i / (kSamples - 1);
    m = std::max(m, std::abs(c.jet(x, 1).block(1)[0]));
  }
  return m;
}

double nth(const JetEvaluator& f, double x, int n) {
  const Point p{x};
  return f(p, n).block(n)[0];
}

}  // namespace

double psi_constant(int n, double beta) {
  double c = 1.0;
  for (int j = 1; j <= n; ++j) c *= j + beta;
  return c;
}

PsiFamily::PsiFamily(int n_, double beta_, Cutoff cutoff_)
    : n(n_), beta(beta_), cutoff(cutoff_), constant(psi_constant(n_, beta_)),
      psi(psi_field(n_, beta_, cutoff_)), chi(cutoff_field(1, n_, cutoff_)) {
  if (n < 1) throw std::invalid_argument("psi family needs n >= 1");
  if (!(max_cutoff_slope(cutoff) < 1.0)) throw std::invalid_argument("cutoff must satisfy |chi'| < 1");
}

std::vector<DiscRow> disc_experiment(int n, double beta, std::span<const double> k_list, const DiscOptions& opts) {
  const PsiFamily fam(n, beta);
  double max_shift = 0.0;
  for (double k : k_list) {
    if (!(k > 0.0)) throw std::invalid_argument("disc_experiment: k must be positive");
    max_shift = std::max(max_shift, 1.0 / k);
  }
  const SampleGrid base(fam.psi.support().enlarged(max_shift), opts.points_per_axis);
  const double chi_norm = hoelder_norm(fam.chi, n, beta, base, opts.pair_budget).value;

  std::vector<DiscRow> rows;
  for (double k : k_list) {
    DiscRow row;
    row.k = k;
    row.threshold = 2.0 * fam.constant;
    const JetEvaluator chart = scaled(fam.chi, 1.0 / k);
    try {
      DiffeoField::certify(chart, base);
      row.diffeomorphism = true;
    } catch (const NumericalError&) {
      rows.push_back(row);
      continue;
    }
    row.chart_norm = hoelder_norm(chart, n, beta, base, opts.pair_budget).value;
    row.scaled_norm = chi_norm / k;

    const JetEvaluator g = difference(left_translate(fam.psi, chart), fam.psi);
    const PointPair witness{{-1.0 / k}, {0.0}};
    const JetSamples at_pair = JetSamples::evaluate(g, SampleGrid(Box::cube(1, -1.0 / k, 0.0), 1, {witness}), n);
    const auto& jets = at_pair.jets();
    const double dn = std::abs(jets[1].block(n)[0] - jets[2].block(n)[0]);
    row.witness = dn / std::pow(1.0 / k, beta);
    row.seminorm = hoelder_seminorm(g, n, beta, base.with_pairs({witness}), opts.pair_budget).value;
    row.pass = row.witness >= row.threshold - 1e-9;
    rows.push_back(row);
  }
  return rows;
}

OptimalReport optimal_experiment(int n, double beta, double alpha, double gamma, std::span<const double> s_list) {
  if (!(0.0 < alpha && alpha < beta)) throw std::invalid_argument("optimal_experiment needs 0 < alpha < beta");
  if (!(gamma > 0.0)) throw std::invalid_argument("optimal_experiment needs gamma > 0");
  const PsiFamily fam(n, beta);
  for (double s : s_list) {
    if (!(s > 0.0 && s < fam.cutoff.inner)) {
      throw std::invalid_argument("optimal_experiment: s must lie in (0, plateau radius)");
    }
  }
  OptimalReport rep;
  rep.expected_slope = beta - alpha - gamma;
  std::vector<double> lx, ly;
  for (double s : s_list) {
    const JetEvaluator theta_s = left_translate(fam.psi, scaled(fam.chi, s));
    const double second = nth(theta_s, 0.0, n) - nth(theta_s, -s, n) - nth(fam.psi, 0.0, n) + nth(fam.psi, -s, n);
    OptimalRow row;
    row.s = s;
    row.q = std::abs(second) / (std::pow(s, alpha) * std::pow(s, gamma));
    row.closed_form = 2.0 * fam.constant * std::pow(s, rep.expected_slope);
    row.rel_error = std::abs(row.q - row.closed_form) / row.closed_form;
    rep.max_rel_error = std::max(rep.max_rel_error, row.rel_error);
    lx.push_back(std::log(s));
    ly.push_back(std::log(row.q));
    rep.rows.push_back(row);
  }
  rep.slope = least_squares_slope(lx, ly);
  return rep;
}

SeparabilityReport separability_gap(int n, double beta, std::span<const double> t_list) {
  const PsiFamily fam(n, beta);
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] >= 0.0 && t_list[i] <= fam.cutoff.inner)) {
      throw std::invalid_argument("separability_gap: translations must lie in [0, plateau radius]");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (t_list[i] == t_list[j]) throw std::invalid_argument("separability_gap: translations must be distinct");
    }
  }
  SeparabilityReport rep;
  rep.min_quotient = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    for (std::size_t j = i + 1; j < t_list.size(); ++j) {
      const double t = t_list[i];
      const double s = t_list[j];
      const Point shift_t{t};
      const Point shift_s{s};
      const JetEvaluator f = difference(translated(fam.psi, shift_t), translated(fam.psi, shift_s));
      SeparabilityRow row;
      row.t = t;
      row.s = s;
      row.threshold = 2.0 * fam.constant;
      row.quotient = std::abs(nth(f, t, n) - nth(f, s, n)) / std::pow(std::abs(t - s), beta);
      row.pass = row.quotient >= row.threshold - 1e-9;
      rep.min_quotient = std::min(rep.min_quotient, row.quotient);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace holoflow
