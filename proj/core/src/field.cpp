#include "holoflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace holoflow {

Box Box::cube(int dim, double lo, double hi) {
  if (dim < 1 || !(lo <= hi)) throw std::invalid_argument("invalid cube");
  return Box{std::vector<double>(static_cast<std::size_t>(dim), lo),
             std::vector<double>(static_cast<std::size_t>(dim), hi)};
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

Box Box::enlarged(double margin) const {
  Box b = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    b.lo[i] -= margin;
    b.hi[i] += margin;
  }
  return b;
}

Box Box::hull(const Box& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("box dimension mismatch");
  Box b = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    b.lo[i] = std::min(lo[i], other.lo[i]);
    b.hi[i] = std::max(hi[i], other.hi[i]);
  }
  return b;
}

JetEvaluator::JetEvaluator(int dim_in, int dim_out, int order, Box support, std::string label, Fn fn,
                           std::optional<double> value_bound) {
  if (dim_in < 1 || dim_out < 1) throw std::invalid_argument("field dimensions must be positive");
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("field order out of range");
  if (support.dim() != dim_in) throw std::invalid_argument("support box dimension mismatch");
  if (!fn) throw std::invalid_argument("field needs an evaluation function");
  impl_ = std::make_shared<const Impl>(
      Impl{dim_in, dim_out, order, std::move(support), std::move(label), std::move(fn), value_bound});
}

Jet JetEvaluator::operator()(std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) != impl_->dim_in) {
    throw std::invalid_argument("query point has dimension " + std::to_string(x.size()) +
                                ", field '" + impl_->label + "' expects " + std::to_string(impl_->dim_in));
  }
  if (order < 0 || order > impl_->order) {
    throw std::invalid_argument("field '" + impl_->label + "' provides jets up to order " +
                                std::to_string(impl_->order) + ", requested " + std::to_string(order));
  }
  if (!impl_->support.contains(x)) return Jet(impl_->dim_in, impl_->dim_out, order);
  Jet j = impl_->fn(x, order);
  if (j.order() != order) j = j.truncated(order);
  return j;
}

JetEvaluator zero_field(int dim_in, int dim_out, int order) {
  return JetEvaluator(
      dim_in, dim_out, order, Box::cube(dim_in, 0.0, 0.0), "zero",
      [dim_in, dim_out](std::span<const double>, int ord) { return Jet(dim_in, dim_out, ord); }, 0.0);
}

JetEvaluator scaled(const JetEvaluator& f, double c) {
  std::ostringstream label;
  label.precision(17);
  label << c << "*(" << f.label() << ")";
  std::optional<double> bound;
  if (f.value_bound()) bound = std::abs(c) * *f.value_bound();
  return JetEvaluator(
      f.dim_in(), f.dim_out(), f.order(), f.support(), label.str(),
      [f, c](std::span<const double> x, int ord) {
        Jet j = f(x, ord);
        j *= c;
        return j;
      },
      bound);
}

JetEvaluator sum(const JetEvaluator& f, const JetEvaluator& g) {
  if (f.dim_in() != g.dim_in() || f.dim_out() != g.dim_out()) {
    throw std::invalid_argument("sum of fields with different shapes");
  }
  std::optional<double> bound;
  if (f.value_bound() && g.value_bound()) bound = *f.value_bound() + *g.value_bound();
  return JetEvaluator(
      f.dim_in(), f.dim_out(), std::min(f.order(), g.order()), f.support().hull(g.support()),
      f.label() + "+" + g.label(),
      [f, g](std::span<const double> x, int ord) {
        Jet j = f(x, ord);
        j += g(x, ord);
        return j;
      },
      bound);
}

JetEvaluator difference(const JetEvaluator& f, const JetEvaluator& g) {
  if (f.dim_in() != g.dim_in() || f.dim_out() != g.dim_out()) {
    throw std::invalid_argument("difference of fields with different shapes");
  }
  std::optional<double> bound;
  if (f.value_bound() && g.value_bound()) bound = *f.value_bound() + *g.value_bound();
  return JetEvaluator(
      f.dim_in(), f.dim_out(), std::min(f.order(), g.order()), f.support().hull(g.support()),
      f.label() + "-(" + g.label() + ")",
      [f, g](std::span<const double> x, int ord) {
        Jet j = f(x, ord);
        j -= g(x, ord);
        return j;
      },
      bound);
}

JetEvaluator translated(const JetEvaluator& f, std::span<const double> shift) {
  if (static_cast<int>(shift.size()) != f.dim_in()) throw std::invalid_argument("shift dimension mismatch");
  Box box = f.support();
  for (std::size_t i = 0; i < shift.size(); ++i) {
    box.lo[i] += shift[i];
    box.hi[i] += shift[i];
  }
  std::vector<double> s(shift.begin(), shift.end());
  return JetEvaluator(
      f.dim_in(), f.dim_out(), f.order(), box, f.label() + "(x-shift)",
      [f, s](std::span<const double> x, int ord) {
        Point y(x.begin(), x.end());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] -= s[i];
        return f(y, ord);
      },
      f.value_bound());
}

JetEvaluator left_translate(const JetEvaluator& g, const JetEvaluator& f) {
  if (f.dim_in() != f.dim_out() || f.dim_out() != g.dim_in()) {
    throw std::invalid_argument("left_translate needs f : R^d -> R^d and g defined on R^d");
  }
  if (!f.value_bound()) throw std::invalid_argument("left_translate needs a value bound on the inner field");
  const Box box = g.support().enlarged(*f.value_bound());
  return JetEvaluator(
      g.dim_in(), g.dim_out(), std::min(g.order(), f.order()), box, g.label() + "o(Id+" + f.label() + ")",
      [g, f](std::span<const double> x, int ord) {
        Jet inner = f(x, ord);
        inner += identity_jet(x, ord);
        const Jet outer = g(inner.value(), ord);
        return jet_compose(outer, inner, ord);
      },
      g.value_bound());
}

}  // namespace holoflow
