#include "holoflow/fields.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace holoflow {

namespace {

// Below this argument exp(-1/s) and every derivative is under 1e-250 and is
// flushed to zero, which keeps s^{-k} factors from overflowing.
constexpr double kStepFlush = 1.0 / 600.0;

// Jet of h(s) = exp(-1/s), s > 0.
Jet mollifier_jet(double s, int order) {
  std::vector<double> inner(static_cast<std::size_t>(order) + 1);
  inner[0] = -1.0 / s;
  double fact = 1.0;
  for (int k = 1; k <= order; ++k) {
    fact *= k;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k+1}
    inner[static_cast<std::size_t>(k)] = sign * fact / std::pow(s, k + 1);
  }
  const std::vector<double> outer(static_cast<std::size_t>(order) + 1, std::exp(inner[0]));
  return jet_compose(scalar_jet(outer), scalar_jet(inner), order);
}

Jet constant_scalar(double v, int order) {
  Jet j(1, 1, order);
  j.value()[0] = v;
  return j;
}

// Lifts a univariate scalar jet in coordinate `axis` to a jet on R^dim.
Jet lift(const Jet& uni, int axis, int dim) {
  if (dim == 1) return uni;
  Jet j(dim, 1, uni.order());
  for (int k = 0; k <= uni.order(); ++k) {
    std::size_t flat = 0;
    for (int r = 0; r < k; ++r) flat = flat * static_cast<std::size_t>(dim) + static_cast<std::size_t>(axis);
    j.block(k)[flat] = uni.block(k)[0];
  }
  return j;
}

// Product over axes of univariate scalar jets, as a scalar jet on R^dim.
Jet axis_product(const std::vector<Jet>& factors, int order) {
  const int dim = static_cast<int>(factors.size());
  Jet acc = lift(factors[0], 0, dim);
  const auto prod = BilinearMap::scalar_product();
  for (int i = 1; i < dim; ++i) acc = jet_bilinear(prod, acc, lift(factors[static_cast<std::size_t>(i)], i, dim), order);
  return acc;
}

// Copies a scalar jet into dim_out components scaled by weights.
Jet replicate(const Jet& scalar, const std::vector<double>& weights) {
  const int m = static_cast<int>(weights.size());
  Jet j(scalar.dim_in(), m, scalar.order());
  for (int k = 0; k <= scalar.order(); ++k) {
    const auto src = scalar.block(k);
    auto dst = j.block(k);
    for (int o = 0; o < m; ++o) {
      for (std::size_t i = 0; i < src.size(); ++i) dst[static_cast<std::size_t>(o) * src.size() + i] = weights[static_cast<std::size_t>(o)] * src[i];
    }
  }
  return j;
}

// exp(-u^2) with u = (x - c) / sigma, derivatives via Hermite polynomials.
Jet gaussian_1d(double x, double c, double sigma, int order) {
  const double u = (x - c) / sigma;
  const double e = std::exp(-u * u);
  std::vector<double> d(static_cast<std::size_t>(order) + 1);
  double h_prev = 1.0;     // H_0
  double h_cur = 2.0 * u;  // H_1
  d[0] = e;
  double scale = 1.0;
  for (int k = 1; k <= order; ++k) {
    scale /= sigma;
    d[static_cast<std::size_t>(k)] = ((k % 2 == 1) ? -1.0 : 1.0) * h_cur * e * scale;
    const double h_next = 2.0 * u * h_cur - 2.0 * k * h_prev;
    h_prev = h_cur;
    h_cur = h_next;
  }
  return scalar_jet(d);
}

void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("fields are supported for d in {1, 2, 3}");
}

Point default_center(Point center, int dim) {
  if (center.empty()) return Point(static_cast<std::size_t>(dim), 0.0);
  if (static_cast<int>(center.size()) != dim) throw std::invalid_argument("center has wrong dimension");
  return center;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

Jet smooth_step_jet(double s, int order) {
  if (s <= kStepFlush) return Jet(1, 1, order);
  if (s >= 1.0 - kStepFlush) return constant_scalar(1.0, order);
  const Jet p = mollifier_jet(s, order);
  Jet q = mollifier_jet(1.0 - s, order);
  for (int k = 1; k <= order; k += 2) q.block(k)[0] = -q.block(k)[0];
  const Jet denom = p + q;
  std::vector<double> recip(static_cast<std::size_t>(order) + 1);
  const double y = denom.value()[0];
  double fact = 1.0;
  recip[0] = 1.0 / y;
  for (int k = 1; k <= order; ++k) {
    fact *= k;
    recip[static_cast<std::size_t>(k)] = ((k % 2 == 1) ? -1.0 : 1.0) * fact / std::pow(y, k + 1);
  }
  const Jet inv = jet_compose(scalar_jet(recip), denom, order);
  return jet_bilinear(BilinearMap::scalar_product(), p, inv, order);
}

Jet Cutoff::jet(double x, int order) const {
  const double ax = std::abs(x);
  if (ax <= inner) return constant_scalar(1.0, order);
  if (ax >= outer) return Jet(1, 1, order);
  Jet inner_map(1, 1, order);
  if (log_scale) {
    // s = (log outer - log|x|) / L with d^k log|x| = (-1)^{k-1} (k-1)! / x^k.
    const double len = std::log(outer / inner);
    inner_map.value()[0] = (std::log(outer) - std::log(ax)) / len;
    double fact = 1.0;
    for (int k = 1; k <= order; ++k) {
      if (k > 1) fact *= (k - 1);
      const double dk = ((k % 2 == 1) ? 1.0 : -1.0) * fact / std::pow(x, k);
      inner_map.block(k)[0] = -dk / len;
    }
  } else {
    const double width = outer - inner;
    inner_map.value()[0] = (outer - ax) / width;
    if (order >= 1) inner_map.block(1)[0] = (x > 0.0 ? -1.0 : 1.0) / width;
  }
  return jet_compose(smooth_step_jet(inner_map.value()[0], order), inner_map, order);
}

JetEvaluator cutoff_field(int dim, int order, Cutoff cutoff, Point center) {
  check_dim(dim);
  if (!(cutoff.inner > 0.0 && cutoff.outer > cutoff.inner)) throw std::invalid_argument("invalid cutoff radii");
  center = default_center(std::move(center), dim);
  Box box = Box::cube(dim, -cutoff.outer, cutoff.outer);
  for (int i = 0; i < dim; ++i) {
    box.lo[static_cast<std::size_t>(i)] += center[static_cast<std::size_t>(i)];
    box.hi[static_cast<std::size_t>(i)] += center[static_cast<std::size_t>(i)];
  }
  return JetEvaluator(
      dim, 1, order, box, std::string(cutoff.log_scale ? "logchi[" : "chi[") + fmt(cutoff.inner) + "," + fmt(cutoff.outer) + "]",
      [cutoff, center](std::span<const double> x, int ord) {
        std::vector<Jet> factors;
        factors.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) factors.push_back(cutoff.jet(x[i] - center[i], ord));
        return axis_product(factors, ord);
      },
      1.0);
}

namespace {

std::string gaussian_label(double amplitude, const Point& center, double sigma) {
  std::string label = "gaussian:" + fmt(amplitude) + ":";
  for (std::size_t i = 0; i < center.size(); ++i) label += (i ? "," : "") + fmt(center[i]);
  return label + ":" + fmt(sigma);
}

}  // namespace

JetEvaluator gaussian_field(int dim, int dim_out, int order, double amplitude, Point center, double sigma,
                            std::vector<double> direction) {
  check_dim(dim);
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian width must be positive");
  center = default_center(std::move(center), dim);
  if (direction.empty()) direction.assign(static_cast<std::size_t>(dim_out), 1.0);
  if (static_cast<int>(direction.size()) != dim_out) throw std::invalid_argument("direction has wrong dimension");
  double dir_norm = 0.0;
  for (double& v : direction) {
    v *= amplitude;
    dir_norm += v * v;
  }
  const Cutoff cutoff{3.0 * sigma, 6.0 * sigma};
  Box box = Box::cube(dim, -cutoff.outer, cutoff.outer);
  for (int i = 0; i < dim; ++i) {
    box.lo[static_cast<std::size_t>(i)] += center[static_cast<std::size_t>(i)];
    box.hi[static_cast<std::size_t>(i)] += center[static_cast<std::size_t>(i)];
  }
  return JetEvaluator(
      dim, dim_out, order, box, gaussian_label(amplitude, center, sigma),
      [cutoff, center, sigma, direction](std::span<const double> x, int ord) {
        std::vector<Jet> factors;
        factors.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
          Jet g = gaussian_1d(x[i], center[i], sigma, ord);
          if (std::abs(x[i] - center[i]) > cutoff.inner) {
            g = jet_bilinear(BilinearMap::scalar_product(), g, cutoff.jet(x[i] - center[i], ord), ord);
          }
          factors.push_back(std::move(g));
        }
        return replicate(axis_product(factors, ord), direction);
      },
      std::sqrt(dir_norm));
}

JetEvaluator plateau_shift(int dim, int order, std::vector<double> shift, Cutoff cutoff) {
  check_dim(dim);
  if (static_cast<int>(shift.size()) != dim) throw std::invalid_argument("shift has wrong dimension");
  double bound = 0.0;
  for (double v : shift) bound += v * v;
  const auto chi = cutoff_field(dim, order, cutoff);
  std::string label = "plateau-shift:";
  for (std::size_t i = 0; i < shift.size(); ++i) label += (i ? "," : "") + fmt(shift[i]);
  return JetEvaluator(
      dim, dim, order, chi.support(), label,
      [chi, shift](std::span<const double> x, int ord) { return replicate(chi(x, ord), shift); },
      std::sqrt(bound));
}

JetEvaluator linear_field(int dim, int order, double slope, Cutoff cutoff) {
  check_dim(dim);
  const auto chi = cutoff_field(dim, order, cutoff);
  return JetEvaluator(
      dim, dim, order, chi.support(), "linear:" + fmt(slope),
      [chi, slope](std::span<const double> x, int ord) {
        const Jet c = chi(x, ord);
        Jet id = identity_jet(x, ord);
        id *= slope;
        const int d = static_cast<int>(x.size());
        return jet_bilinear(BilinearMap::scalar_times_vector(d), c, id, ord);
      },
      std::abs(slope) * cutoff.outer * std::sqrt(static_cast<double>(dim)));
}

JetEvaluator psi_field(int n, double beta, Cutoff cutoff) {
  if (n < 0 || n > kMaxOrder) throw std::invalid_argument("psi needs 0 <= n <= kMaxOrder");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("psi needs beta in (0, 1]");
  const double a = n + beta;
  return JetEvaluator(
      1, 1, n, Box::cube(1, -cutoff.outer, cutoff.outer), "psi:" + std::to_string(n) + ":" + fmt(beta),
      [cutoff, a, n](std::span<const double> xs, int ord) {
        const double x = xs[0];
        std::vector<double> p(static_cast<std::size_t>(ord) + 1, 0.0);
        if (x != 0.0) {
          const double ax = std::abs(x);
          double falling = 1.0;
          for (int j = 0; j <= ord; ++j) {
            if (j > 0) falling *= (a - (j - 1));
            double v = falling * std::pow(ax, a - j);
            if (x < 0.0 && ((n + j) % 2 == 1)) v = -v;
            p[static_cast<std::size_t>(j)] = v;
          }
        }
        const Jet pj = scalar_jet(p);
        if (std::abs(x) <= cutoff.inner) return pj;
        return jet_bilinear(BilinearMap::scalar_product(), pj, cutoff.jet(x, ord), ord);
      },
      std::pow(cutoff.outer, a));
}

JetEvaluator bump_mixture(int dim, int dim_out, int order, const std::vector<BumpSpec>& bumps) {
  if (bumps.empty()) return zero_field(dim, dim_out, order);
  JetEvaluator acc = gaussian_field(dim, dim_out, order, bumps[0].amplitude, bumps[0].center, bumps[0].sigma);
  for (std::size_t i = 1; i < bumps.size(); ++i) {
    acc = sum(acc, gaussian_field(dim, dim_out, order, bumps[i].amplitude, bumps[i].center, bumps[i].sigma));
  }
  return acc;
}

}  // namespace holoflow
