#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "holoflow/tensor.hpp"

namespace holoflow {

/// Highest derivative order supported by the jet engine.
inline constexpr int kMaxOrder = 8;

/// Ordered tuple of positive integers (an integer composition of order()).
struct Composition {
  std::vector<int> parts;

  int order() const;
  int length() const { return static_cast<int>(parts.size()); }
  bool operator==(const Composition&) const = default;
};

/// All compositions of k into l positive parts, in lexicographic order.
/// Throws std::invalid_argument unless 1 <= l <= k.
std::vector<Composition> enumerate_compositions(int l, int k);

/// Memoized enumerate_compositions for k <= kMaxOrder.
const std::vector<Composition>& compositions(int l, int k);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

/// Faà di Bruno coefficient k! / (l! * prod gamma_i!) in lowest terms.
Rational faa_coefficient(const Composition& gamma);

/// Value and derivatives up to order n of a map R^d -> R^m at one point.
/// Block k (0 <= k <= n) is a tensor of shape m x d^k; block 0 is the value.
class Jet {
 public:
  Jet() = default;
  Jet(int dim_in, int dim_out, int order);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  int order() const { return order_; }

  TensorShape shape(int k) const { return {dim_out_, dim_in_, k}; }
  std::span<double> block(int k);
  std::span<const double> block(int k) const;
  ConstTensorView deriv(int k) const { return {block(k), shape(k)}; }

  std::span<double> value() { return block(0); }
  std::span<const double> value() const { return block(0); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Copy keeping only blocks 0..order.
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(double c);
  /// this += c * other
  Jet& axpy(double c, const Jet& other);

  bool all_finite() const;

 private:
  int dim_in_ = 0;
  int dim_out_ = 0;
  int order_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> data_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(double c, Jet a);

/// Jet of the identity map at x.
Jet identity_jet(std::span<const double> x, int order);
/// Jet of a univariate scalar function given its derivatives f(x), f'(x), ...
Jet scalar_jet(std::span<const double> derivatives);

/// Order-n jet of g o f at x, from the jet of f at x and the jet of g at f(x).
/// Derivative blocks of the result are symmetrized.
Jet jet_compose(const Jet& g, const Jet& f, int order);

/// Unsymmetrized sum over l in [l_min, l_max] and gamma in Gamma(l, k) of
/// c_gamma * g^{(l)}(f^{(gamma_1)}, ..., f^{(gamma_l)}); shape g.dim_out x d^k.
std::vector<double> faa_di_bruno_terms(const Jet& g, const Jet& f, int k, int l_min, int l_max);

/// Bilinear map b : R^left x R^right -> R^out with coefficients
/// b(u, v)_o = sum_{a,c} coeffs[(o * left + a) * right + c] u_a v_c.
struct BilinearMap {
  int left = 1;
  int right = 1;
  int out = 1;
  std::vector<double> coeffs;

  /// (s, t) -> s t on R x R.
  static BilinearMap scalar_product();
  /// (s, v) -> s v on R x R^m.
  static BilinearMap scalar_times_vector(int m);
  /// (u, v) -> <u, v> on R^m x R^m.
  static BilinearMap inner_product(int m);
  /// (A, v) -> A v on L(R^d, R^d) x R^d, A stored row-major as a vector in R^{d*d}.
  static BilinearMap matrix_vector(int d);
};

/// Order-n jet of x -> b(f(x), g(x)) by the Leibniz rule, symmetrized.
Jet jet_bilinear(const BilinearMap& b, const Jet& f, const Jet& g, int order);

}  // namespace holoflow
