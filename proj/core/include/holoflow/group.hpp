#pragma once

#include <optional>
#include <span>
#include <vector>

#include "holoflow/hoelder.hpp"

namespace holoflow {

/// Phi = Id + phi with a sampled certificate min det dPhi > 0. The certificate
/// is evidence, not a proof of bijectivity.
class DiffeoField {
 public:
  /// Certifies phi on `grid` (default: SampleGrid::over(phi.support())).
  /// Throws NumericalError(not_a_diffeomorphism) when the minimum determinant is <= 0.
  static DiffeoField certify(JetEvaluator phi, std::optional<SampleGrid> grid = std::nullopt);
  static DiffeoField identity(int dim, int order);
  /// Wraps phi with a minimum determinant obtained elsewhere (e.g. from flow
  /// jets). Throws NumericalError(not_a_diffeomorphism) if min_det <= 0.
  static DiffeoField certified(JetEvaluator phi, double min_det);

  const JetEvaluator& phi() const { return phi_; }
  int dim() const { return phi_.dim_in(); }
  int order() const { return phi_.order(); }
  double min_det() const { return min_det_; }

  /// Jet of the full map Id + phi at x.
  Jet jet(std::span<const double> x, int order) const;
  Point apply(std::span<const double> x) const;

 private:
  DiffeoField(JetEvaluator phi, double min_det) : phi_(std::move(phi)), min_det_(min_det) {}

  JetEvaluator phi_;
  double min_det_;
};

double jacobian_det(std::span<const double> a, int d);

/// min over the grid of det(I + dphi(x)), including the value 1 outside the
/// support. Throws NumericalError(not_a_diffeomorphism) if the minimum is <= 0.
double orientation_check(const JetEvaluator& phi, const SampleGrid& grid);

/// Psi o Phi, with chart xi = phi + psi o (Id + phi).
DiffeoField compose(const DiffeoField& psi, const DiffeoField& phi);

struct InvertOptions {
  double newton_tol = 1e-12;
  int max_iter = 50;
};

/// Solves y + phi(y) = x by Newton from y = x, halving the step up to 30
/// times whenever the residual grows.
Point newton_preimage(const JetEvaluator& phi, std::span<const double> x, const InvertOptions& opts = {});
/// As above, starting from `start` instead of x.
Point newton_preimage(const JetEvaluator& phi, std::span<const double> x, std::span<const double> start,
                      const InvertOptions& opts = {});

/// Jet at Phi(y) of Phi^{-1}, given the order-n jet of Phi at y. The value
/// block of the result is y.
Jet inverse_jet(const Jet& phi_full, std::span<const double> y);

/// Phi^{-1} = Id + tau with tau's jets from the triangular identity d^k(Phi^{-1} o Phi) = 0.
DiffeoField invert(const DiffeoField& phi, const InvertOptions& opts = {});

struct MatrixBoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// ||A^{-1}|| <= |det A|^{-1} ||A||^{d-1} for a d x d row-major matrix, spectral norms.
MatrixBoundReport inverse_matrix_bound(std::span<const double> a, int d);

struct CompositionBoundReport {
  double lhs = 0.0;
  double g_norm = 0.0;
  double f_norm = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// ||g o (Id+f)||_{1,alpha} <= 2 ||g||_{1,alpha} (1 + ||f||_{1,alpha})^{1+alpha}, relative slack 1e-6.
CompositionBoundReport composition_bound(const JetEvaluator& f, const JetEvaluator& g, double alpha,
                                         const SampleGrid& grid, std::size_t pair_budget = kDefaultPairBudget);

struct ContinuityRow {
  double eps = 0.0;
  double distance = 0.0;
  double perturbation = 0.0;
  double ratio = 0.0;
};

struct ContinuityReport {
  std::vector<ContinuityRow> rows;
  double max_ratio = 0.0;
};

/// ratio(eps) = ||inv(phi0) - inv(phi0 + eps w)||_{n,alpha} / ||eps w||_{n,alpha}^{beta-alpha},
/// with 0/0 read as 0.
ContinuityReport inversion_continuity_experiment(const JetEvaluator& phi0, const JetEvaluator& w,
                                                 std::span<const double> eps_list, int n, double alpha,
                                                 double beta, const SampleGrid& grid,
                                                 std::size_t pair_budget = kDefaultPairBudget);

}  // namespace holoflow
