#pragma once

#include <cmath>
#include <vector>

#include "holoflow/field.hpp"

namespace holoflow {

/// Smooth step S : R -> [0, 1], S = 0 on (-inf, 0], S = 1 on [1, inf),
/// S(s) = h(s) / (h(s) + h(1 - s)) with h(s) = exp(-1/s). Max slope S'(1/2) = 2.
Jet smooth_step_jet(double s, int order);

/// Even cutoff chi(x) = S((outer - |x|) / (outer - inner)): identically 1 on
/// [-inner, inner], supported in [-outer, outer], |chi'| <= 2 / (outer - inner).
struct Cutoff {
  double inner = 1.0;
  double outer = 4.0;
  /// Transition linear in log|x| instead: chi = S((log outer - log|x|) / log(outer / inner)),
  /// so that |x chi'(x)| <= 2 / log(outer / inner).
  bool log_scale = false;

  /// Plateau [-1, 1], support [-4, 4], max |chi'| = 2/3.
  static Cutoff standard() { return Cutoff{1.0, 4.0}; }

  /// Upper bound on |chi'|.
  double max_slope() const {
    return log_scale ? 2.0 / (inner * std::log(outer / inner)) : 2.0 / (outer - inner);
  }
  Jet jet(double x, int order) const;
};

/// Scalar field prod_i chi(x_i - center_i).
JetEvaluator cutoff_field(int dim, int order, Cutoff cutoff = Cutoff::standard(),
                          Point center = {});

/// direction * amplitude * exp(-|x - c|^2 / sigma^2) * prod_i chi((x_i - c_i)),
/// with a cutoff plateau of radius 3 sigma and support radius 6 sigma.
/// `dim_out` copies of the profile are scaled by direction (default all ones).
JetEvaluator gaussian_field(int dim, int dim_out, int order, double amplitude, Point center = {},
                            double sigma = 1.0, std::vector<double> direction = {});

/// shift * chi(x) with chi the product cutoff: constant `shift` on the plateau box.
JetEvaluator plateau_shift(int dim, int order, std::vector<double> shift,
                           Cutoff cutoff = Cutoff::standard());

/// x -> slope * x * chi(x) (componentwise, dim_out = dim). The default cutoff is
/// log-scaled with outer / inner = 9 > e^2, which keeps |d(slope x chi)| <= |slope|
/// everywhere when d = 1.
JetEvaluator linear_field(int dim, int order, double slope, Cutoff cutoff = Cutoff{1.0, 9.0, true});

/// Univariate x -> x^n |x|^beta chi(x). Jets are available up to order n.
JetEvaluator psi_field(int n, double beta, Cutoff cutoff = Cutoff::standard());

struct BumpSpec {
  double amplitude = 0.0;
  Point center;
  double sigma = 1.0;
};

/// Sum of Gaussian bumps, each replicated over dim_out components.
JetEvaluator bump_mixture(int dim, int dim_out, int order, const std::vector<BumpSpec>& bumps);

}  // namespace holoflow
