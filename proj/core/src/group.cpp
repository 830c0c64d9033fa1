#include "holoflow/group.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "holoflow/error.hpp"
#include "holoflow/parallel.hpp"

namespace holoflow {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kSingularDet = 1e-12;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// I + block, for a first-derivative block of a field R^d -> R^d.
std::vector<double> identity_plus(std::span<const double> a, int d) {
  std::vector<double> m(a.begin(), a.end());
  for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i * d + i)] += 1.0;
  return m;
}

std::vector<double> inverse_of(std::span<const double> a, int d) {
  const Eigen::Map<const RowMatrix> m(a.data(), d, d);
  const RowMatrix inv = m.inverse();
  return {inv.data(), inv.data() + static_cast<std::size_t>(d * d)};
}

void require_square(const JetEvaluator& phi) {
  if (phi.dim_in() != phi.dim_out()) throw std::invalid_argument("diffeomorphism chart must map R^d to R^d");
  if (phi.order() < 1) throw std::invalid_argument("diffeomorphism chart needs order >= 1");
}

}  // namespace

double jacobian_det(std::span<const double> a, int d) {
  switch (d) {
    case 1:
      return a[0];
    case 2:
      return a[0] * a[3] - a[1] * a[2];
    case 3:
      return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
             a[2] * (a[3] * a[7] - a[4] * a[6]);
    default: {
      const Eigen::Map<const RowMatrix> m(a.data(), d, d);
      return m.determinant();
    }
  }
}

double orientation_check(const JetEvaluator& phi, const SampleGrid& grid) {
  require_square(phi);
  const int d = phi.dim_in();
  const auto& pts = grid.points();
  std::vector<double> dets(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Jet j = phi(pts[i], 1);
    dets[i] = jacobian_det(identity_plus(j.block(1), d), d);
  });
  // Outside the support dPhi = I.
  double eps = 1.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (!(dets[i] >= eps)) {
      eps = dets[i];
      worst = i;
    }
  }
  if (!(eps > 0.0)) {
    throw NumericalError(ErrorCode::not_a_diffeomorphism,
                         "det dPhi = " + std::to_string(eps) + " <= 0 on the certification grid", worst);
  }
  return eps;
}

DiffeoField DiffeoField::certify(JetEvaluator phi, std::optional<SampleGrid> grid) {
  require_square(phi);
  const SampleGrid g = grid ? *grid : SampleGrid::over(phi.support());
  const double eps = orientation_check(phi, g);
  return DiffeoField(std::move(phi), eps);
}

DiffeoField DiffeoField::certified(JetEvaluator phi, double min_det) {
  require_square(phi);
  if (!(min_det > 0.0)) {
    throw NumericalError(ErrorCode::not_a_diffeomorphism, "supplied minimum determinant is not positive");
  }
  return DiffeoField(std::move(phi), min_det);
}

DiffeoField DiffeoField::identity(int dim, int order) { return DiffeoField(zero_field(dim, dim, order), 1.0); }

Jet DiffeoField::jet(std::span<const double> x, int order) const {
  Jet j = phi_(x, order);
  j += identity_jet(x, order);
  return j;
}

Point DiffeoField::apply(std::span<const double> x) const {
  const Jet j = phi_(x, 0);
  Point y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += j.value()[i];
  return y;
}

DiffeoField compose(const DiffeoField& psi, const DiffeoField& phi) {
  if (psi.dim() != phi.dim()) throw std::invalid_argument("compose: dimension mismatch");
  if (psi.order() != phi.order()) throw std::invalid_argument("compose: order mismatch");
  return DiffeoField::certify(sum(left_translate(psi.phi(), phi.phi()), phi.phi()));
}

Point newton_preimage(const JetEvaluator& phi, std::span<const double> x, const InvertOptions& opts) {
  return newton_preimage(phi, x, x, opts);
}

Point newton_preimage(const JetEvaluator& phi, std::span<const double> x, std::span<const double> start,
                      const InvertOptions& opts) {
  const int d = phi.dim_in();
  const auto du = static_cast<std::size_t>(d);
  if (x.size() != du || start.size() != du) throw std::invalid_argument("newton_preimage: dimension mismatch");
  Point y(start.begin(), start.end());
  auto residual = [&](const Jet& j, const Point& at) {
    std::vector<double> r(du);
    for (std::size_t i = 0; i < du; ++i) r[i] = at[i] + j.value()[i] - x[i];
    return r;
  };
  Jet j = phi(y, 1);
  std::vector<double> r = residual(j, y);
  double rn = norm2(r);
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    if (rn <= opts.newton_tol) return y;
    const auto a = identity_plus(j.block(1), d);
    const double det = jacobian_det(a, d);
    if (!(std::abs(det) >= kSingularDet)) {
      throw NumericalError(ErrorCode::ill_conditioned, "Newton step: |det dPhi| below 1e-12");
    }
    const auto ainv = inverse_of(a, d);
    std::vector<double> step(du, 0.0);
    for (std::size_t o = 0; o < du; ++o) {
      for (std::size_t c = 0; c < du; ++c) step[o] -= ainv[o * du + c] * r[c];
    }
    double scale = 1.0;
    Point trial(du);
    Jet jt;
    std::vector<double> rt;
    double rtn = 0.0;
    for (int halving = 0;; ++halving) {
      for (std::size_t i = 0; i < du; ++i) trial[i] = y[i] + scale * step[i];
      jt = phi(trial, 1);
      rt = residual(jt, trial);
      rtn = norm2(rt);
      if (rtn <= rn || halving == 30) break;
      scale *= 0.5;
    }
    y = std::move(trial);
    j = std::move(jt);
    r = std::move(rt);
    rn = rtn;
  }
  if (rn <= opts.newton_tol) return y;
  throw NumericalError(ErrorCode::singular_or_far_from_identity,
                       "Newton did not reach the residual tolerance in " + std::to_string(opts.max_iter) +
                           " iterations (residual " + std::to_string(rn) + ")");
}

Jet inverse_jet(const Jet& phi_full, std::span<const double> y) {
  const int d = phi_full.dim_in();
  const int n = phi_full.order();
  if (phi_full.dim_out() != d) throw std::invalid_argument("inverse_jet: map must be R^d -> R^d");
  if (n < 1) throw std::invalid_argument("inverse_jet: order must be at least 1");
  const auto a = phi_full.block(1);
  if (!(std::abs(jacobian_det(a, d)) >= kSingularDet)) {
    throw NumericalError(ErrorCode::ill_conditioned, "inverse jet: |det dPhi| below 1e-12");
  }
  const auto ainv = inverse_of(a, d);
  Jet g(d, d, n);
  std::copy(y.begin(), y.end(), g.block(0).begin());
  std::copy(ainv.begin(), ainv.end(), g.block(1).begin());
  for (int k = 2; k <= n; ++k) {
    // G_k(A, ..., A) = -sym sum_{l<k} sum_gamma c_gamma G_l(Phi^(gamma_1), ...).
    auto rhs = faa_di_bruno_terms(g, phi_full, k, 1, k - 1);
    for (double& v : rhs) v = -v;
    symmetrize(rhs, g.shape(k));
    auto gk = contract_all_slots(rhs, g.shape(k), ainv);
    symmetrize(gk, g.shape(k));
    std::copy(gk.begin(), gk.end(), g.block(k).begin());
  }
  return g;
}

DiffeoField invert(const DiffeoField& phi, const InvertOptions& opts) {
  const JetEvaluator& f = phi.phi();
  if (!f.value_bound()) throw std::invalid_argument("invert needs a value bound on the chart");
  const int d = f.dim_in();
  const double bound = *f.value_bound();
  JetEvaluator::Fn fn = [f, opts, d](std::span<const double> x, int ord) {
    const Point y = newton_preimage(f, x, opts);
    if (ord == 0) {
      Jet g(d, d, 0);
      for (int i = 0; i < d; ++i) g.value()[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
      return g;
    }
    Jet full = f(y, ord);
    full += identity_jet(y, ord);
    Jet g = inverse_jet(full, y);
    for (int i = 0; i < d; ++i) g.block(0)[static_cast<std::size_t>(i)] -= x[static_cast<std::size_t>(i)];
    if (ord >= 1) {
      for (int i = 0; i < d; ++i) g.block(1)[static_cast<std::size_t>(i * d + i)] -= 1.0;
    }
    return g;
  };
  JetEvaluator tau(d, d, f.order(), f.support().enlarged(bound), "inv(" + f.label() + ")", std::move(fn), bound);
  return DiffeoField::certify(std::move(tau));
}

MatrixBoundReport inverse_matrix_bound(std::span<const double> a, int d) {
  if (d < 1 || a.size() != static_cast<std::size_t>(d * d)) {
    throw std::invalid_argument("inverse_matrix_bound: need a d x d matrix");
  }
  const Eigen::Map<const RowMatrix> m(a.data(), d, d);
  const double det = m.determinant();
  const Eigen::JacobiSVD<RowMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(d - 1);
  if (det == 0.0 || smin == 0.0) throw std::invalid_argument("inverse_matrix_bound: matrix is singular");
  MatrixBoundReport r;
  r.lhs = 1.0 / smin;
  r.rhs = std::pow(smax, d - 1) / std::abs(det);
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-10);
  return r;
}

CompositionBoundReport composition_bound(const JetEvaluator& f, const JetEvaluator& g, double alpha,
                                         const SampleGrid& grid, std::size_t pair_budget) {
  const JetEvaluator comp = left_translate(g, f);
  CompositionBoundReport r;
  r.lhs = hoelder_norm(comp, 1, alpha, grid, pair_budget).value;
  r.g_norm = hoelder_norm(g, 1, alpha, grid, pair_budget).value;
  r.f_norm = hoelder_norm(f, 1, alpha, grid, pair_budget).value;
  r.rhs = 2.0 * r.g_norm * std::pow(1.0 + r.f_norm, 1.0 + alpha);
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-6);
  return r;
}

ContinuityReport inversion_continuity_experiment(const JetEvaluator& phi0, const JetEvaluator& w,
                                                 std::span<const double> eps_list, int n, double alpha,
                                                 double beta, const SampleGrid& grid, std::size_t pair_budget) {
  if (!(0.0 < alpha && alpha < beta && beta <= 1.0)) {
    throw std::invalid_argument("inversion continuity needs 0 < alpha < beta <= 1");
  }
  if (n < 1 || phi0.order() < n || w.order() < n) throw std::invalid_argument("fields must have order >= n");
  const DiffeoField inv0 = invert(DiffeoField::certify(phi0));
  const JetSamples base = JetSamples::evaluate(inv0.phi(), grid, n);
  const JetSamples w_samples = JetSamples::evaluate(w, grid, n);
  ContinuityReport rep;
  for (double eps : eps_list) {
    const DiffeoField inv = invert(DiffeoField::certify(sum(phi0, scaled(w, eps))));
    const JetSamples moved = JetSamples::evaluate(inv.phi(), grid, n);
    ContinuityRow row;
    row.eps = eps;
    row.distance = hoelder_norm(base - moved, n, alpha, pair_budget).value;
    row.perturbation = hoelder_norm(w_samples.scaled(eps), n, alpha, pair_budget).value;
    row.ratio = row.perturbation == 0.0 ? 0.0 : row.distance / std::pow(row.perturbation, beta - alpha);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace holoflow
