#include "holoflow/jets.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace holoflow {

int Composition::order() const { return std::accumulate(parts.begin(), parts.end(), 0); }

namespace {

void enumerate_into(int l, int k, std::vector<int>& prefix, std::vector<Composition>& out) {
  if (l == 1) {
    prefix.push_back(k);
    out.push_back(Composition{prefix});
    prefix.pop_back();
    return;
  }
  for (int first = 1; first <= k - (l - 1); ++first) {
    prefix.push_back(first);
    enumerate_into(l - 1, k - first, prefix, out);
    prefix.pop_back();
  }
}

std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct FaaTerm {
  Composition gamma;
  double coefficient;
};

// terms[k][l] lists Gamma(l, k) together with c_gamma.
struct FaaTable {
  std::array<std::array<std::vector<FaaTerm>, kMaxOrder + 1>, kMaxOrder + 1> terms;
  std::array<std::array<std::vector<Composition>, kMaxOrder + 1>, kMaxOrder + 1> comps;
};

const FaaTable& faa_table() {
  static const FaaTable table = [] {
    FaaTable t;
    for (int k = 1; k <= kMaxOrder; ++k) {
      for (int l = 1; l <= k; ++l) {
        t.comps[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = enumerate_compositions(l, k);
        for (const auto& g : t.comps[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]) {
          t.terms[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)].push_back(
              FaaTerm{g, faa_coefficient(g).value()});
        }
      }
    }
    return t;
  }();
  return table;
}

void check_order(int order) {
  if (order < 0 || order > kMaxOrder) {
    throw std::invalid_argument("jet order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  }
}

}  // namespace

std::vector<Composition> enumerate_compositions(int l, int k) {
  if (l < 1 || l > k) {
    throw std::invalid_argument("compositions require 1 <= l <= k (got l=" + std::to_string(l) +
                                ", k=" + std::to_string(k) + ")");
  }
  std::vector<Composition> out;
  std::vector<int> prefix;
  enumerate_into(l, k, prefix, out);
  return out;
}

const std::vector<Composition>& compositions(int l, int k) {
  if (l < 1 || l > k) throw std::invalid_argument("compositions require 1 <= l <= k");
  if (k > kMaxOrder) throw std::invalid_argument("composition order exceeds kMaxOrder");
  return faa_table().comps[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
}

Rational faa_coefficient(const Composition& gamma) {
  const int k = gamma.order();
  const int l = gamma.length();
  std::int64_t den = factorial(l);
  for (int p : gamma.parts) den *= factorial(p);
  std::int64_t num = factorial(k);
  const std::int64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

Jet::Jet(int dim_in, int dim_out, int order) : dim_in_(dim_in), dim_out_(dim_out), order_(order) {
  if (dim_in < 1 || dim_out < 1) throw std::invalid_argument("jet dimensions must be positive");
  check_order(order);
  offsets_.resize(static_cast<std::size_t>(order) + 2);
  std::size_t off = 0;
  for (int k = 0; k <= order; ++k) {
    offsets_[static_cast<std::size_t>(k)] = off;
    off += static_cast<std::size_t>(dim_out) * int_pow(dim_in, k);
  }
  offsets_[static_cast<std::size_t>(order) + 1] = off;
  data_.assign(off, 0.0);
}

std::span<double> Jet::block(int k) {
  if (k < 0 || k > order_) throw std::out_of_range("jet block out of range");
  const auto b = offsets_[static_cast<std::size_t>(k)];
  return std::span<double>(data_).subspan(b, offsets_[static_cast<std::size_t>(k) + 1] - b);
}

std::span<const double> Jet::block(int k) const {
  if (k < 0 || k > order_) throw std::out_of_range("jet block out of range");
  const auto b = offsets_[static_cast<std::size_t>(k)];
  return std::span<const double>(data_).subspan(b, offsets_[static_cast<std::size_t>(k) + 1] - b);
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw std::invalid_argument("cannot truncate a jet to a higher order");
  Jet r(dim_in_, dim_out_, order);
  std::copy(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(r.data_.size()), r.data_.begin());
  return r;
}

namespace {
void check_same_layout(const Jet& a, const Jet& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out() || a.order() != b.order()) {
    throw std::invalid_argument("jet arithmetic requires identical dimensions and order");
  }
}
}  // namespace

Jet& Jet::operator+=(const Jet& other) {
  check_same_layout(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  check_same_layout(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Jet& Jet::operator*=(double c) {
  for (double& v : data_) v *= c;
  return *this;
}

Jet& Jet::axpy(double c, const Jet& other) {
  check_same_layout(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += c * other.data_[i];
  return *this;
}

bool Jet::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(double c, Jet a) { return a *= c; }

Jet identity_jet(std::span<const double> x, int order) {
  const int d = static_cast<int>(x.size());
  Jet j(d, d, order);
  std::copy(x.begin(), x.end(), j.value().begin());
  if (order >= 1) {
    auto b = j.block(1);
    for (int i = 0; i < d; ++i) b[static_cast<std::size_t>(i * d + i)] = 1.0;
  }
  return j;
}

Jet scalar_jet(std::span<const double> derivatives) {
  if (derivatives.empty()) throw std::invalid_argument("scalar_jet needs at least a value");
  Jet j(1, 1, static_cast<int>(derivatives.size()) - 1);
  std::copy(derivatives.begin(), derivatives.end(), j.data().begin());
  return j;
}

std::vector<double> faa_di_bruno_terms(const Jet& g, const Jet& f, int k, int l_min, int l_max) {
  if (g.dim_in() != f.dim_out()) {
    throw std::invalid_argument("jet_compose: inner output dimension " + std::to_string(f.dim_out()) +
                                " does not match outer input dimension " + std::to_string(g.dim_in()));
  }
  if (k < 1) throw std::invalid_argument("Faà di Bruno terms need k >= 1");
  if (g.order() < l_max || f.order() < k) throw std::invalid_argument("jet orders too small");
  const int m = g.dim_out();
  const int mid = f.dim_out();
  const int d = f.dim_in();
  const auto& table = faa_table();

  std::vector<double> result(static_cast<std::size_t>(m) * int_pow(d, k), 0.0);

  if (d == 1 && mid == 1) {
    for (int l = l_min; l <= l_max; ++l) {
      double weight = 0.0;
      for (const auto& term : table.terms[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]) {
        double prod = term.coefficient;
        for (int p : term.gamma.parts) prod *= f.block(p)[0];
        weight += prod;
      }
      if (weight == 0.0) continue;
      const auto gl = g.block(l);
      for (int o = 0; o < m; ++o) result[static_cast<std::size_t>(o)] += weight * gl[static_cast<std::size_t>(o)];
    }
    return result;
  }

  std::vector<double> cur, next;
  for (int l = l_min; l <= l_max; ++l) {
    const auto gl = g.block(l);
    for (const auto& term : table.terms[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]) {
      cur.assign(gl.begin(), gl.end());
      std::size_t post = 1;
      for (int r = l - 1; r >= 0; --r) {
        const int part = term.gamma.parts[static_cast<std::size_t>(r)];
        const std::size_t pre = static_cast<std::size_t>(m) * int_pow(mid, r);
        const std::size_t cols = int_pow(d, part);
        contract_slot(cur, pre, static_cast<std::size_t>(mid), post, f.block(part), cols, next);
        cur.swap(next);
        post *= cols;
      }
      for (std::size_t i = 0; i < result.size(); ++i) result[i] += term.coefficient * cur[i];
    }
  }
  return result;
}

Jet jet_compose(const Jet& g, const Jet& f, int order) {
  if (g.dim_in() != f.dim_out()) {
    throw std::invalid_argument("jet_compose: inner output dimension " + std::to_string(f.dim_out()) +
                                " does not match outer input dimension " + std::to_string(g.dim_in()));
  }
  if (order < 0 || g.order() < order || f.order() < order) {
    throw std::invalid_argument("jet_compose: operand orders below requested order");
  }
  Jet r(f.dim_in(), g.dim_out(), order);
  const auto gv = g.value();
  std::copy(gv.begin(), gv.end(), r.value().begin());
  for (int k = 1; k <= order; ++k) {
    auto terms = faa_di_bruno_terms(g, f, k, 1, k);
    symmetrize(terms, r.shape(k));
    std::copy(terms.begin(), terms.end(), r.block(k).begin());
  }
  return r;
}

BilinearMap BilinearMap::scalar_product() { return BilinearMap{1, 1, 1, {1.0}}; }

BilinearMap BilinearMap::scalar_times_vector(int m) {
  BilinearMap b{1, m, m, std::vector<double>(static_cast<std::size_t>(m * m), 0.0)};
  for (int o = 0; o < m; ++o) b.coeffs[static_cast<std::size_t>(o * m + o)] = 1.0;
  return b;
}

BilinearMap BilinearMap::inner_product(int m) {
  BilinearMap b{m, m, 1, std::vector<double>(static_cast<std::size_t>(m * m), 0.0)};
  for (int a = 0; a < m; ++a) b.coeffs[static_cast<std::size_t>(a * m + a)] = 1.0;
  return b;
}

BilinearMap BilinearMap::matrix_vector(int d) {
  const int left = d * d;
  BilinearMap b{left, d, d, std::vector<double>(static_cast<std::size_t>(d * left * d), 0.0)};
  for (int o = 0; o < d; ++o) {
    for (int c = 0; c < d; ++c) {
      const int a = o * d + c;  // A[o][c]
      b.coeffs[static_cast<std::size_t>((o * left + a) * d + c)] = 1.0;
    }
  }
  return b;
}

Jet jet_bilinear(const BilinearMap& b, const Jet& f, const Jet& g, int order) {
  if (f.dim_in() != g.dim_in()) throw std::invalid_argument("jet_bilinear: operands on different domains");
  if (f.dim_out() != b.left || g.dim_out() != b.right) {
    throw std::invalid_argument("jet_bilinear: operand shapes do not match the bilinear map");
  }
  if (b.coeffs.size() != static_cast<std::size_t>(b.out * b.left * b.right)) {
    throw std::invalid_argument("jet_bilinear: malformed bilinear map");
  }
  if (order < 0 || f.order() < order || g.order() < order) {
    throw std::invalid_argument("jet_bilinear: operand orders below requested order");
  }
  const int d = f.dim_in();
  Jet r(d, b.out, order);
  for (int k = 0; k <= order; ++k) {
    auto out = r.block(k);
    double binom = 1.0;
    for (int l = 0; l <= k; ++l) {
      if (l > 0) binom = binom * static_cast<double>(k - l + 1) / static_cast<double>(l);
      const auto fl = f.block(l);
      const auto gk = g.block(k - l);
      const std::size_t ni = int_pow(d, l);
      const std::size_t nj = int_pow(d, k - l);
      for (int o = 0; o < b.out; ++o) {
        for (int a = 0; a < b.left; ++a) {
          for (int c = 0; c < b.right; ++c) {
            const double coeff = b.coeffs[static_cast<std::size_t>((o * b.left + a) * b.right + c)];
            if (coeff == 0.0) continue;
            const double w = binom * coeff;
            for (std::size_t i = 0; i < ni; ++i) {
              const double fa = fl[static_cast<std::size_t>(a) * ni + i];
              if (fa == 0.0) continue;
              double* dst = out.data() + static_cast<std::size_t>(o) * ni * nj + i * nj;
              const double* src = gk.data() + static_cast<std::size_t>(c) * nj;
              for (std::size_t j = 0; j < nj; ++j) dst[j] += w * fa * src[j];
            }
          }
        }
      }
    }
    symmetrize(out, r.shape(k));
  }
  return r;
}

}  // namespace holoflow
