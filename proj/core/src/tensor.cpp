#include "holoflow/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <utility>

namespace holoflow {

std::size_t int_pow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

std::size_t TensorShape::input_size() const { return int_pow(in, rank); }

namespace {

std::size_t flat_index(const TensorShape& s, int o, std::span<const int> index) {
  if (static_cast<int>(index.size()) != s.rank) {
    throw std::invalid_argument("tensor index has wrong rank");
  }
  std::size_t flat = 0;
  for (int i : index) {
    if (i < 0 || i >= s.in) throw std::out_of_range("tensor index out of range");
    flat = flat * static_cast<std::size_t>(s.in) + static_cast<std::size_t>(i);
  }
  if (o < 0 || o >= s.out) throw std::out_of_range("tensor output index out of range");
  return static_cast<std::size_t>(o) * s.input_size() + flat;
}

// Permutation classes of the flat input indices for a given (in, rank).
struct SymmetryClasses {
  std::vector<std::vector<std::size_t>> members;
};

std::shared_ptr<const SymmetryClasses> symmetry_classes(int in, int rank) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SymmetryClasses>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{in, rank}];
  if (slot) return slot;

  const std::size_t n = int_pow(in, rank);
  std::map<std::vector<int>, std::vector<std::size_t>> by_key;
  std::vector<int> digits(static_cast<std::size_t>(rank));
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rest = flat;
    for (int r = rank - 1; r >= 0; --r) {
      digits[static_cast<std::size_t>(r)] = static_cast<int>(rest % static_cast<std::size_t>(in));
      rest /= static_cast<std::size_t>(in);
    }
    auto key = digits;
    std::sort(key.begin(), key.end());
    by_key[key].push_back(flat);
  }
  auto classes = std::make_shared<SymmetryClasses>();
  for (auto& [key, members] : by_key) {
    if (members.size() > 1) classes->members.push_back(std::move(members));
  }
  slot = classes;
  return slot;
}

// Unit direction tuples for sampled operator norms: `budget` independent
// tuples followed by `budget` diagonal tuples (v, ..., v).
std::shared_ptr<const std::vector<double>> opnorm_directions(int in, int rank, int budget) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const std::vector<double>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{in, rank, budget}];
  if (slot) return slot;

  std::mt19937_64 rng(0x5eedULL ^ (static_cast<std::uint64_t>(in) << 16) ^
                      (static_cast<std::uint64_t>(rank) << 8));
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto tuple_len = static_cast<std::size_t>(in) * static_cast<std::size_t>(rank);
  auto dirs = std::make_shared<std::vector<double>>(2 * static_cast<std::size_t>(budget) * tuple_len);
  auto unit = [&](double* v) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (int i = 0; i < in; ++i) {
        v[i] = normal(rng);
        norm += v[i] * v[i];
      }
    } while (norm < 1e-20);
    norm = std::sqrt(norm);
    for (int i = 0; i < in; ++i) v[i] /= norm;
  };
  double* p = dirs->data();
  for (int b = 0; b < budget; ++b, p += tuple_len) {
    for (int r = 0; r < rank; ++r) unit(p + static_cast<std::size_t>(r) * static_cast<std::size_t>(in));
  }
  for (int b = 0; b < budget; ++b, p += tuple_len) {
    unit(p);
    for (int r = 1; r < rank; ++r) {
      std::copy(p, p + in, p + static_cast<std::size_t>(r) * static_cast<std::size_t>(in));
    }
  }
  slot = dirs;
  return slot;
}

double euclidean(std::span<const double> v) {
  if (v.size() == 1) return std::abs(v[0]);
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double x : v) s += (x / scale) * (x / scale);
  return scale * std::sqrt(s);
}

double largest_singular_value(ConstTensorView t) {
  const int m = t.shape.out;
  const int d = t.shape.in;
  // Gram matrix T^T T (d x d).
  std::vector<double> gram(static_cast<std::size_t>(d * d), 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int o = 0; o < m; ++o) {
        s += t.data[static_cast<std::size_t>(o * d + i)] * t.data[static_cast<std::size_t>(o * d + j)];
      }
      gram[static_cast<std::size_t>(i * d + j)] = s;
    }
  }
  double best = 0.0;
  std::vector<double> v(static_cast<std::size_t>(d)), w(static_cast<std::size_t>(d));
  for (int start = 0; start <= d; ++start) {
    if (start < d) {
      std::fill(v.begin(), v.end(), 0.0);
      v[static_cast<std::size_t>(start)] = 1.0;
    } else {
      std::fill(v.begin(), v.end(), 1.0 / std::sqrt(static_cast<double>(d)));
    }
    double lambda = 0.0;
    for (int iter = 0; iter < 2000; ++iter) {
      for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) s += gram[static_cast<std::size_t>(i * d + j)] * v[static_cast<std::size_t>(j)];
        w[static_cast<std::size_t>(i)] = s;
      }
      const double next = euclidean(w);
      if (next == 0.0) {
        lambda = 0.0;
        break;
      }
      for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / next;
      const bool converged = std::abs(next - lambda) <= 1e-12 * next;
      lambda = next;
      if (converged) break;
    }
    best = std::max(best, lambda);
  }
  return std::sqrt(best);
}

}  // namespace

double ConstTensorView::at(int o, std::span<const int> index) const {
  return data[flat_index(shape, o, index)];
}

Tensor::Tensor(TensorShape shape) : shape_(shape), data_(shape.size(), 0.0) {}

Tensor::Tensor(TensorShape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size()) throw std::invalid_argument("tensor data size mismatch");
}

double& Tensor::at(int o, std::span<const int> index) { return data_[flat_index(shape_, o, index)]; }

double Tensor::at(int o, std::span<const int> index) const {
  return data_[flat_index(shape_, o, index)];
}

void symmetrize(std::span<double> data, TensorShape shape) {
  if (shape.rank < 2 || shape.in < 2) return;
  const auto classes = symmetry_classes(shape.in, shape.rank);
  const std::size_t block = shape.input_size();
  for (int o = 0; o < shape.out; ++o) {
    double* base = data.data() + static_cast<std::size_t>(o) * block;
    for (const auto& members : classes->members) {
      const double first = base[members.front()];
      bool uniform = true;
      double sum = 0.0;
      for (std::size_t idx : members) {
        uniform = uniform && base[idx] == first;
        sum += base[idx];
      }
      if (uniform) continue;
      const double mean = sum / static_cast<double>(members.size());
      for (std::size_t idx : members) base[idx] = mean;
    }
  }
}

void contract_slot(std::span<const double> x, std::size_t pre, std::size_t mid, std::size_t post,
                   std::span<const double> f, std::size_t cols, std::vector<double>& y) {
  y.assign(pre * cols * post, 0.0);
  for (std::size_t p = 0; p < pre; ++p) {
    for (std::size_t j = 0; j < mid; ++j) {
      const double* xrow = x.data() + (p * mid + j) * post;
      for (std::size_t r = 0; r < cols; ++r) {
        const double fj = f[j * cols + r];
        if (fj == 0.0) continue;
        double* yrow = y.data() + (p * cols + r) * post;
        for (std::size_t q = 0; q < post; ++q) yrow[q] += xrow[q] * fj;
      }
    }
  }
}

std::vector<double> contract_all_slots(std::span<const double> data, TensorShape shape,
                                       std::span<const double> m) {
  std::vector<double> cur(data.begin(), data.end());
  std::vector<double> next;
  const auto in = static_cast<std::size_t>(shape.in);
  for (int slot = shape.rank - 1; slot >= 0; --slot) {
    const std::size_t pre = static_cast<std::size_t>(shape.out) * int_pow(shape.in, slot);
    const std::size_t post = int_pow(shape.in, shape.rank - 1 - slot);
    contract_slot(cur, pre, in, post, m, in, next);
    cur.swap(next);
  }
  return cur;
}

void apply_tensor(ConstTensorView t, std::span<const double> vs, std::span<double> out) {
  const auto in = static_cast<std::size_t>(t.shape.in);
  std::vector<double> cur(t.data.begin(), t.data.end());
  std::size_t len = cur.size();
  for (int slot = t.shape.rank - 1; slot >= 0; --slot) {
    const double* v = vs.data() + static_cast<std::size_t>(slot) * in;
    const std::size_t rows = len / in;
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < in; ++j) s += cur[r * in + j] * v[j];
      cur[r] = s;
    }
    len = rows;
  }
  std::copy(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(out.size()), out.begin());
}

double tensor_opnorm(ConstTensorView t, int budget) {
  const TensorShape& s = t.shape;
  if (s.rank == 0 || s.in == 1) {
    // A single input coordinate: T(1, ..., 1) is the whole tensor.
    return euclidean(t.data.first(s.size()));
  }
  if (s.rank == 1) return largest_singular_value(t);

  const std::size_t block = s.input_size();
  double best = 0.0;
  // Coordinate tuples: entries T[:, i_1..i_k].
  std::vector<double> column(static_cast<std::size_t>(s.out));
  for (std::size_t flat = 0; flat < block; ++flat) {
    for (int o = 0; o < s.out; ++o) column[static_cast<std::size_t>(o)] = t.data[static_cast<std::size_t>(o) * block + flat];
    best = std::max(best, euclidean(column));
  }
  if (budget <= 0) return best;

  const auto dirs = opnorm_directions(s.in, s.rank, budget);
  const std::size_t tuple_len = static_cast<std::size_t>(s.in) * static_cast<std::size_t>(s.rank);
  std::vector<double> out(static_cast<std::size_t>(s.out));
  for (std::size_t b = 0; b < 2 * static_cast<std::size_t>(budget); ++b) {
    apply_tensor(t, std::span<const double>(dirs->data() + b * tuple_len, tuple_len), out);
    best = std::max(best, euclidean(out));
  }
  return best;
}

}  // namespace holoflow
