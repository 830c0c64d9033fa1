#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace holoflow {

/// Shape of a dense multilinear array R^out (x) (R^in)^{(x) rank}. Entries are
/// stored output-major: flat = o * in^rank + (i_1 * in^{rank-1} + ... + i_rank).
struct TensorShape {
  int out = 1;
  int in = 1;
  int rank = 0;

  std::size_t input_size() const;  // in^rank
  std::size_t size() const { return static_cast<std::size_t>(out) * input_size(); }
  bool operator==(const TensorShape&) const = default;
};

std::size_t int_pow(int base, int exp);

/// Read-only view of a tensor stored in a flat buffer.
struct ConstTensorView {
  std::span<const double> data;
  TensorShape shape;

  double at(int o, std::span<const int> index) const;
};

/// Owning dense tensor.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(TensorShape shape);
  Tensor(TensorShape shape, std::vector<double> data);

  const TensorShape& shape() const { return shape_; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  ConstTensorView view() const { return {data_, shape_}; }

  double& at(int o, std::span<const int> index);
  double at(int o, std::span<const int> index) const;

 private:
  TensorShape shape_;
  std::vector<double> data_;
};

/// Averages every entry over all permutations of its input slots, in place.
/// Entries whose permutation class already agrees are left bit-identical, so
/// symmetrizing twice gives exactly the same buffer.
void symmetrize(std::span<double> data, TensorShape shape);

/// Y[p, r, q] = sum_j X[p, j, q] * F[j, r] where X has layout (pre, mid, post)
/// and F is mid x cols, row-major. Y is resized to pre * cols * post.
void contract_slot(std::span<const double> x, std::size_t pre, std::size_t mid,
                   std::size_t post, std::span<const double> f, std::size_t cols,
                   std::vector<double>& y);

/// Pre-composes every input slot with the square matrix m (in x in, row-major):
/// T'(v_1, ..., v_k) = T(M v_1, ..., M v_k).
std::vector<double> contract_all_slots(std::span<const double> data, TensorShape shape,
                                       std::span<const double> m);

/// Evaluates T(v_1, ..., v_k) for unit vectors packed contiguously in `vs`.
void apply_tensor(ConstTensorView t, std::span<const double> vs, std::span<double> out);

inline constexpr int kDefaultOpnormBudget = 256;

/// Operator norm sup ||T(v_1, ..., v_k)|| over unit vectors (Euclidean norms).
/// Exact for rank 0, for in == 1, and for rank 1 (power iteration on T^T T);
/// otherwise the maximum over all coordinate tuples plus `budget` seeded random
/// tuples and `budget` random diagonal tuples, which is a lower bound.
double tensor_opnorm(ConstTensorView t, int budget = kDefaultOpnormBudget);

}  // namespace holoflow
