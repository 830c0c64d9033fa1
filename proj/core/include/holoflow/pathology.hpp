#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "holoflow/fields.hpp"
#include "holoflow/hoelder.hpp"

namespace holoflow {

/// (n + beta)(n - 1 + beta) ... (1 + beta).
double psi_constant(int n, double beta);

/// psi(x) = x^n |x|^beta chi(x) with psi^{(n)} = C |x|^beta on the plateau of chi.
struct PsiFamily {
  /// Throws std::invalid_argument unless 1 <= n <= kMaxOrder, beta in (0, 1] and
  /// the sampled max |chi'| of the cutoff is below 1.
  PsiFamily(int n, double beta, Cutoff cutoff = Cutoff::standard());

  int n;
  double beta;
  Cutoff cutoff;
  double constant;
  JetEvaluator psi;
  JetEvaluator chi;
};

struct DiscRow {
  double k = 0.0;
  bool diffeomorphism = false;  // orientation certificate of Id + chi/k
  double chart_norm = 0.0;      // ||chi/k||_{n,beta} on the grid
  double scaled_norm = 0.0;     // ||chi||_{n,beta} / k
  double witness = 0.0;         // quotient of psi o Phi_k - psi at (-1/k, 0)
  double seminorm = 0.0;        // grid estimate including the witness pair
  double threshold = 0.0;       // 2 C
  bool pass = false;
};

struct DiscOptions {
  int points_per_axis = 4001;
  std::size_t pair_budget = kDefaultPairBudget;
};

/// Left translation by psi is discontinuous: Phi_k -> Id while psi o Phi_k stays 2C away.
std::vector<DiscRow> disc_experiment(int n, double beta, std::span<const double> k_list,
                                     const DiscOptions& opts = {});

struct OptimalRow {
  double s = 0.0;
  double q = 0.0;
  double closed_form = 0.0;  // 2 C s^{beta - alpha - gamma}
  double rel_error = 0.0;
};

struct OptimalReport {
  std::vector<OptimalRow> rows;
  double slope = 0.0;
  double expected_slope = 0.0;
  double max_rel_error = 0.0;
};

/// Q(s) for theta(t) = psi o (Id + t chi), from jets at 0 and -s. Requires
/// 0 < alpha < beta, gamma > 0 and every s in (0, plateau radius).
OptimalReport optimal_experiment(int n, double beta, double alpha, double gamma, std::span<const double> s_list);

struct SeparabilityRow {
  double t = 0.0;
  double s = 0.0;
  double quotient = 0.0;  // [psi(. - t) - psi(. - s)]_{n,beta} at the pair (t, s)
  double threshold = 0.0;
  bool pass = false;
};

struct SeparabilityReport {
  std::vector<SeparabilityRow> rows;
  /// Minimum quotient over all pairs; +inf for fewer than two translations.
  double min_quotient = 0.0;
};

/// Requires distinct translations in [0, plateau radius].
SeparabilityReport separability_gap(int n, double beta, std::span<const double> t_list);

}  // namespace holoflow
