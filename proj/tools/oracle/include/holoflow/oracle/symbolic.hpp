#pragma once

// Independent reference for derivative checks: a small expression tree with
// symbolic differentiation. Shares no code with the jet engine.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace holoflow::oracle {

enum class Op { constant, var, add, mul, sin, cos, exp, powi };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::constant;
  double value = 0.0;  // constant
  int index = 0;       // var index, powi exponent
  ExprPtr a;
  ExprPtr b;
};

inline ExprPtr constant(double v) { return std::make_shared<const Expr>(Expr{Op::constant, v, 0, nullptr, nullptr}); }
inline ExprPtr var(int i) { return std::make_shared<const Expr>(Expr{Op::var, 0.0, i, nullptr, nullptr}); }

inline bool is_const(const ExprPtr& e, double v) { return e->op == Op::constant && e->value == v; }

inline ExprPtr add(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->op == Op::constant && b->op == Op::constant) return constant(a->value + b->value);
  return std::make_shared<const Expr>(Expr{Op::add, 0.0, 0, std::move(a), std::move(b)});
}

inline ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->op == Op::constant && b->op == Op::constant) return constant(a->value * b->value);
  return std::make_shared<const Expr>(Expr{Op::mul, 0.0, 0, std::move(a), std::move(b)});
}

inline ExprPtr sin(ExprPtr a) { return std::make_shared<const Expr>(Expr{Op::sin, 0.0, 0, std::move(a), nullptr}); }
inline ExprPtr cos(ExprPtr a) { return std::make_shared<const Expr>(Expr{Op::cos, 0.0, 0, std::move(a), nullptr}); }
inline ExprPtr exp(ExprPtr a) { return std::make_shared<const Expr>(Expr{Op::exp, 0.0, 0, std::move(a), nullptr}); }

inline ExprPtr powi(ExprPtr a, int k) {
  if (k < 0) throw std::invalid_argument("powi needs a nonnegative exponent");
  if (k == 0) return constant(1.0);
  if (k == 1) return a;
  return std::make_shared<const Expr>(Expr{Op::powi, 0.0, k, std::move(a), nullptr});
}

inline double eval(const ExprPtr& e, std::span<const double> x) {
  switch (e->op) {
    case Op::constant: return e->value;
    case Op::var: return x[static_cast<std::size_t>(e->index)];
    case Op::add: return eval(e->a, x) + eval(e->b, x);
    case Op::mul: return eval(e->a, x) * eval(e->b, x);
    case Op::sin: return std::sin(eval(e->a, x));
    case Op::cos: return std::cos(eval(e->a, x));
    case Op::exp: return std::exp(eval(e->a, x));
    case Op::powi: {
      const double base = eval(e->a, x);
      double r = 1.0;
      for (int i = 0; i < e->index; ++i) r *= base;
      return r;
    }
  }
  return 0.0;
}

/// d e / d x_i.
inline ExprPtr diff(const ExprPtr& e, int i) {
  switch (e->op) {
    case Op::constant: return constant(0.0);
    case Op::var: return constant(e->index == i ? 1.0 : 0.0);
    case Op::add: return add(diff(e->a, i), diff(e->b, i));
    case Op::mul: return add(mul(diff(e->a, i), e->b), mul(e->a, diff(e->b, i)));
    case Op::sin: return mul(cos(e->a), diff(e->a, i));
    case Op::cos: return mul(mul(constant(-1.0), sin(e->a)), diff(e->a, i));
    case Op::exp: return mul(e, diff(e->a, i));
    case Op::powi:
      return mul(mul(constant(static_cast<double>(e->index)), powi(e->a, e->index - 1)), diff(e->a, i));
  }
  return constant(0.0);
}

/// Replaces var(j) by subs[j].
inline ExprPtr substitute(const ExprPtr& e, const std::vector<ExprPtr>& subs) {
  switch (e->op) {
    case Op::constant: return e;
    case Op::var: return subs.at(static_cast<std::size_t>(e->index));
    case Op::add: return add(substitute(e->a, subs), substitute(e->b, subs));
    case Op::mul: return mul(substitute(e->a, subs), substitute(e->b, subs));
    case Op::sin: return sin(substitute(e->a, subs));
    case Op::cos: return cos(substitute(e->a, subs));
    case Op::exp: return exp(substitute(e->a, subs));
    case Op::powi: return powi(substitute(e->a, subs), e->index);
  }
  return e;
}

inline std::string to_string(const ExprPtr& e) {
  switch (e->op) {
    case Op::constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", e->value);
      return buf;
    }
    case Op::var: return "x" + std::to_string(e->index);
    case Op::add: return "(" + to_string(e->a) + " + " + to_string(e->b) + ")";
    case Op::mul: return to_string(e->a) + "*" + to_string(e->b);
    case Op::sin: return "sin(" + to_string(e->a) + ")";
    case Op::cos: return "cos(" + to_string(e->a) + ")";
    case Op::exp: return "exp(" + to_string(e->a) + ")";
    case Op::powi: return "(" + to_string(e->a) + ")^" + std::to_string(e->index);
  }
  return "?";
}

/// Memoized partial derivatives of one expression, keyed by sorted index tuples.
class Partials {
 public:
  explicit Partials(ExprPtr e) { cache_[{}] = std::move(e); }

  const ExprPtr& get(std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    auto it = cache_.find(idx);
    if (it != cache_.end()) return it->second;
    std::vector<int> head(idx.begin(), idx.end() - 1);
    ExprPtr d = diff(get(head), idx.back());
    return cache_.emplace(std::move(idx), std::move(d)).first->second;
  }

  /// All k-th partials at x, flattened over (i_1, ..., i_k) with i_k fastest.
  std::vector<double> tensor(int k, int dim, std::span<const double> x) {
    std::size_t count = 1;
    for (int j = 0; j < k; ++j) count *= static_cast<std::size_t>(dim);
    std::vector<double> out(count);
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (std::size_t flat = 0; flat < count; ++flat) {
      std::size_t r = flat;
      for (int j = k - 1; j >= 0; --j) {
        idx[static_cast<std::size_t>(j)] = static_cast<int>(r % static_cast<std::size_t>(dim));
        r /= static_cast<std::size_t>(dim);
      }
      out[flat] = eval(get(idx), x);
    }
    return out;
  }

 private:
  std::map<std::vector<int>, ExprPtr> cache_;
};

/// Random smooth expression in x_0 .. x_{dim-1} built from polynomials,
/// sin, cos and exp of bounded arguments. Coefficients lie in [-1, 1].
class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed) : rng_(seed) {}

  ExprPtr generate(int dim, int depth) {
    if (depth <= 0) return leaf(dim);
    switch (pick(6)) {
      case 0: return add(generate(dim, depth - 1), generate(dim, depth - 1));
      case 1: return mul(generate(dim, depth - 1), generate(dim, depth - 1));
      case 2: return sin(add(mul(coef(), generate(dim, depth - 1)), coef()));
      case 3: return cos(add(mul(coef(), generate(dim, depth - 1)), coef()));
      case 4: return exp(mul(constant(0.5 * unit()), sin(generate(dim, depth - 1))));
      default: return powi(generate(dim, depth - 1), 2 + pick(2));
    }
  }

  double unit() { return 2.0 * static_cast<double>(rng_() >> 11) * 0x1.0p-53 - 1.0; }
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

 private:
  ExprPtr coef() { return constant(unit()); }
  ExprPtr leaf(int dim) {
    if (pick(4) == 0) return constant(unit());
    return mul(constant(unit()), var(pick(dim)));
  }

  std::mt19937_64 rng_;
};

/// Central difference of fn along axis i.
template <class Fn>
double central_difference(Fn&& fn, std::vector<double> x, int i, double h) {
  x[static_cast<std::size_t>(i)] += h;
  const double plus = fn(x);
  x[static_cast<std::size_t>(i)] -= 2.0 * h;
  const double minus = fn(x);
  return (plus - minus) / (2.0 * h);
}

/// Fourth-order central difference along axis i.
template <class Fn>
double five_point_difference(Fn&& fn, std::vector<double> x, int i, double h) {
  const auto at = [&](double offset) {
    std::vector<double> y = x;
    y[static_cast<std::size_t>(i)] += offset;
    return fn(y);
  };
  return (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
}

}  // namespace holoflow::oracle
