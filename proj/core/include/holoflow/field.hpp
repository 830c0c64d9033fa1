#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "holoflow/jets.hpp"

namespace holoflow {

using Point = std::vector<double>;

/// Closed axis-aligned box.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> x) const;
  Box enlarged(double margin) const;
  Box hull(const Box& other) const;
  bool operator==(const Box&) const = default;
};

/// Immutable field R^d -> R^m returning order-n jets. Outside its support box
/// the field and all its derivatives vanish; the wrapper enforces this.
class JetEvaluator {
 public:
  using Fn = std::function<Jet(std::span<const double> x, int order)>;

  JetEvaluator(int dim_in, int dim_out, int order, Box support, std::string label, Fn fn,
               std::optional<double> value_bound = std::nullopt);

  int dim_in() const { return impl_->dim_in; }
  int dim_out() const { return impl_->dim_out; }
  int order() const { return impl_->order; }
  const Box& support() const { return impl_->support; }
  const std::string& label() const { return impl_->label; }
  /// Upper bound on sup ||f(x)||, when one is known analytically.
  std::optional<double> value_bound() const { return impl_->value_bound; }

  Jet operator()(std::span<const double> x) const { return (*this)(x, impl_->order); }
  Jet operator()(std::span<const double> x, int order) const;

 private:
  struct Impl {
    int dim_in;
    int dim_out;
    int order;
    Box support;
    std::string label;
    Fn fn;
    std::optional<double> value_bound;
  };
  std::shared_ptr<const Impl> impl_;
};

JetEvaluator zero_field(int dim_in, int dim_out, int order);
JetEvaluator scaled(const JetEvaluator& f, double c);
/// Pointwise sum; the order is the smaller of the two.
JetEvaluator sum(const JetEvaluator& f, const JetEvaluator& g);
JetEvaluator difference(const JetEvaluator& f, const JetEvaluator& g);
/// x -> f(x - shift).
JetEvaluator translated(const JetEvaluator& f, std::span<const double> shift);
/// x -> g(x + f(x)): left translation of g by Id + f (f : R^d -> R^d).
JetEvaluator left_translate(const JetEvaluator& g, const JetEvaluator& f);

}  // namespace holoflow
