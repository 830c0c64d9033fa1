#include "holoflow/hoelder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "holoflow/csv.hpp"
#include "holoflow/parallel.hpp"

namespace holoflow {

namespace {

double distance(const Point& x, const Point& y) {
  if (x.size() == 1) return std::abs(x[0] - y[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Strictly better: larger value, or equal value and lexicographically smaller witness.
bool better_point(double v, const Point& w, double best, const Point& best_w) {
  if (v != best) return v > best;
  return lex_less(w, best_w);
}

bool better_pair(double v, const Point& x, const Point& y, double best, const Point& bx, const Point& by) {
  if (v != best) return v > best;
  if (x != bx) return lex_less(x, bx);
  return lex_less(y, by);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("Hoelder exponent must lie in (0, 1]");
}

void check_level(const JetSamples& s, int level) {
  if (level < 0 || level > s.order()) {
    throw std::invalid_argument("derivative level " + std::to_string(level) + " exceeds sampled order " +
                                std::to_string(s.order()));
  }
}

std::string format_box(const Box& b) {
  std::ostringstream os;
  for (int i = 0; i < b.dim(); ++i) {
    if (i > 0) os << 'x';
    os << '[' << format_double(b.lo[static_cast<std::size_t>(i)]) << ':'
       << format_double(b.hi[static_cast<std::size_t>(i)]) << ']';
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- SampleGrid

SampleGrid::SampleGrid(Box box, int points_per_axis, std::vector<PointPair> mandatory_pairs) {
  const int d = box.dim();
  if (d < 1) throw std::invalid_argument("sample grid needs a box of dimension >= 1");
  if (points_per_axis < 1) throw std::invalid_argument("points_per_axis must be positive");
  for (int i = 0; i < d; ++i) {
    if (!(box.lo[static_cast<std::size_t>(i)] <= box.hi[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument("sample grid box has lo > hi");
    }
  }
  for (const auto& p : mandatory_pairs) {
    if (static_cast<int>(p.x.size()) != d || static_cast<int>(p.y.size()) != d) {
      throw std::invalid_argument("mandatory pair dimension differs from the grid");
    }
    if (p.x == p.y) throw std::invalid_argument("mandatory pair endpoints must be distinct");
  }

  auto data = std::make_shared<Data>();
  data->points_per_axis = points_per_axis;
  data->lattice_size = int_pow(points_per_axis, d);
  data->points.reserve(data->lattice_size + 2 * mandatory_pairs.size());

  std::vector<std::vector<double>> axes(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double lo = box.lo[static_cast<std::size_t>(i)];
    const double hi = box.hi[static_cast<std::size_t>(i)];
    auto& ax = axes[static_cast<std::size_t>(i)];
    ax.resize(static_cast<std::size_t>(points_per_axis));
    for (int j = 0; j < points_per_axis; ++j) {
      ax[static_cast<std::size_t>(j)] =
          points_per_axis == 1 ? lo : (j == points_per_axis - 1 ? hi : lo + (hi - lo) * j / (points_per_axis - 1));
    }
  }
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t n = 0; n < data->lattice_size; ++n) {
    Point p(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = axes[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
    data->points.push_back(std::move(p));
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] < points_per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
  }
  for (const auto& p : mandatory_pairs) {
    data->points.push_back(p.x);
    data->points.push_back(p.y);
  }

  std::ostringstream id;
  id << "box=" << format_box(box) << ";ppa=" << points_per_axis << ";pairs=" << mandatory_pairs.size();
  data->id = id.str();
  data->box = std::move(box);
  data->pairs = std::move(mandatory_pairs);
  data_ = std::move(data);
}

int SampleGrid::default_points_per_axis(int dim) {
  switch (dim) {
    case 1:
      return 4001;
    case 2:
      return 201;
    case 3:
      return 41;
    default:
      throw std::invalid_argument("sample grids support d in {1, 2, 3}");
  }
}

SampleGrid SampleGrid::over(const Box& box, std::vector<PointPair> mandatory_pairs) {
  return SampleGrid(box, default_points_per_axis(box.dim()), std::move(mandatory_pairs));
}

SampleGrid SampleGrid::with_pairs(std::vector<PointPair> mandatory_pairs) const {
  return SampleGrid(box(), points_per_axis(), std::move(mandatory_pairs));
}

// ---------------------------------------------------------------- JetSamples

JetSamples::JetSamples(SampleGrid grid, std::vector<Jet> jets) : grid_(std::move(grid)), jets_(std::move(jets)) {
  if (jets_.size() != grid_.points().size()) {
    throw std::invalid_argument("one jet per grid point is required");
  }
  if (jets_.empty()) throw std::invalid_argument("empty sample set");
  for (const auto& j : jets_) {
    if (j.order() != jets_.front().order() || j.dim_in() != jets_.front().dim_in() ||
        j.dim_out() != jets_.front().dim_out()) {
      throw std::invalid_argument("sampled jets must share order and dimensions");
    }
  }
  if (jets_.front().dim_in() != grid_.dim()) throw std::invalid_argument("jet input dimension differs from grid");
}

JetSamples JetSamples::evaluate(const JetEvaluator& f, const SampleGrid& grid, int order) {
  if (f.dim_in() != grid.dim()) throw std::invalid_argument("field dimension differs from grid dimension");
  if (order < 0 || order > f.order()) throw std::invalid_argument("requested order exceeds field order");
  const auto& pts = grid.points();
  std::vector<Jet> jets(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { jets[i] = f(pts[i], order); });
  return JetSamples(grid, std::move(jets));
}

int JetSamples::order() const { return jets_.front().order(); }

JetSamples JetSamples::scaled(double c) const {
  std::vector<Jet> out = jets_;
  for (auto& j : out) j *= c;
  return JetSamples(grid_, std::move(out));
}

JetSamples JetSamples::operator-(const JetSamples& other) const {
  if (other.jets_.size() != jets_.size()) throw std::invalid_argument("sample sets differ in size");
  std::vector<Jet> out = jets_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= other.jets_[i].truncated(out[i].order());
  return JetSamples(grid_, std::move(out));
}

JetSamples JetSamples::operator+(const JetSamples& other) const {
  if (other.jets_.size() != jets_.size()) throw std::invalid_argument("sample sets differ in size");
  std::vector<Jet> out = jets_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.jets_[i].truncated(out[i].order());
  return JetSamples(grid_, std::move(out));
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::sup_level:
      return "sup";
    case NormKind::seminorm:
      return "seminorm";
    case NormKind::full:
      return "full";
  }
  return "unknown";
}

// ---------------------------------------------------------------- pairs

std::vector<std::pair<std::size_t, std::size_t>> select_pairs(const SampleGrid& grid, std::size_t budget) {
  const std::size_t mandatory = grid.mandatory_pairs().size();
  if (budget < mandatory) {
    throw std::invalid_argument("pair budget " + std::to_string(budget) + " is smaller than the " +
                                std::to_string(mandatory) + " mandatory pairs");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t lattice = grid.lattice_size();
  for (std::size_t p = 0; p < mandatory; ++p) pairs.emplace_back(lattice + 2 * p, lattice + 2 * p + 1);

  const int d = grid.dim();
  const int ppa = grid.points_per_axis();
  std::vector<std::size_t> stride(static_cast<std::size_t>(d));
  stride[static_cast<std::size_t>(d - 1)] = 1;
  for (int i = d - 2; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i + 1)] * static_cast<std::size_t>(ppa);
  }

  // Adjacent neighbours along each axis.
  for (std::size_t n = 0; n < lattice && pairs.size() < budget; ++n) {
    for (int i = 0; i < d && pairs.size() < budget; ++i) {
      const std::size_t s = stride[static_cast<std::size_t>(i)];
      const auto coord = static_cast<int>((n / s) % static_cast<std::size_t>(ppa));
      if (coord + 1 < ppa) pairs.emplace_back(n, n + s);
    }
  }

  // All pairs of a coarse sub-lattice with at most kCoarseSubsampleLimit points.
  int per_axis = 1;
  while (int_pow(per_axis + 1, d) <= kCoarseSubsampleLimit) ++per_axis;
  per_axis = std::min(per_axis, ppa);
  if (per_axis >= 2) {
    const int step = (ppa - 1 + per_axis - 2) / (per_axis - 1);
    std::vector<int> ticks;
    for (int j = 0; j < ppa; j += step) ticks.push_back(j);
    std::vector<std::size_t> coarse;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    const std::size_t total = int_pow(static_cast<int>(ticks.size()), d);
    for (std::size_t c = 0; c < total; ++c) {
      std::size_t flat = 0;
      for (int i = 0; i < d; ++i) flat += static_cast<std::size_t>(ticks[idx[static_cast<std::size_t>(i)]]) * stride[static_cast<std::size_t>(i)];
      coarse.push_back(flat);
      for (int i = d - 1; i >= 0; --i) {
        if (++idx[static_cast<std::size_t>(i)] < ticks.size()) break;
        idx[static_cast<std::size_t>(i)] = 0;
      }
    }
    for (std::size_t a = 0; a < coarse.size() && pairs.size() < budget; ++a) {
      for (std::size_t b = a + 1; b < coarse.size() && pairs.size() < budget; ++b) {
        pairs.emplace_back(coarse[a], coarse[b]);
      }
    }
  }
  return pairs;
}

// ---------------------------------------------------------------- differences

DifferenceTable::DifferenceTable(const JetSamples& samples, int level, std::size_t pair_budget)
    : grid_(samples.grid()), level_(level) {
  check_level(samples, level);
  pairs_ = select_pairs(grid_, pair_budget);
  distance_.resize(pairs_.size());
  delta_.resize(pairs_.size());
  const auto& pts = grid_.points();
  const auto& jets = samples.jets();
  const TensorShape shape = jets.front().shape(level);

  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (pairs_.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> diff(shape.size());
    const std::size_t end = std::min(pairs_.size(), (c + 1) * kChunk);
    for (std::size_t p = c * kChunk; p < end; ++p) {
      const auto [i, j] = pairs_[p];
      distance_[p] = distance(pts[i], pts[j]);
      const auto a = jets[i].block(level);
      const auto b = jets[j].block(level);
      for (std::size_t e = 0; e < diff.size(); ++e) diff[e] = a[e] - b[e];
      delta_[p] = tensor_opnorm({diff, shape});
    }
  });
}

NormEstimate DifferenceTable::seminorm(double alpha) const {
  check_alpha(alpha);
  NormEstimate best;
  best.kind = NormKind::seminorm;
  best.level = level_;
  best.alpha = alpha;
  best.grid_id = grid_.id();
  const auto& pts = grid_.points();
  bool found = false;
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const double h = distance_[p];
    if (h == 0.0) continue;
    const double q = delta_[p] / std::pow(h, alpha);
    const auto& x = pts[pairs_[p].first];
    const auto& y = pts[pairs_[p].second];
    if (!found || better_pair(q, x, y, best.value, best.witness, *best.witness_other)) {
      best.value = q;
      best.witness = x;
      best.witness_other = y;
      found = true;
    }
  }
  if (!found) {
    best.witness = pts.front();
    best.witness_other = pts.front();
  }
  return best;
}

// ---------------------------------------------------------------- estimators

NormEstimate sup_norm(const JetSamples& samples, int level) {
  check_level(samples, level);
  const auto& jets = samples.jets();
  const auto& pts = samples.grid().points();
  std::vector<double> vals(jets.size());
  parallel_for(jets.size(), [&](std::size_t i) { vals[i] = tensor_opnorm(jets[i].deriv(level)); });
  NormEstimate best;
  best.kind = NormKind::sup_level;
  best.level = level;
  best.grid_id = samples.grid().id();
  best.value = vals[0];
  best.witness = pts[0];
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (better_point(vals[i], pts[i], best.value, best.witness)) {
      best.value = vals[i];
      best.witness = pts[i];
    }
  }
  return best;
}

NormEstimate sup_norm(const JetEvaluator& f, int level, const SampleGrid& grid) {
  return sup_norm(JetSamples::evaluate(f, grid, level), level);
}

NormEstimate ck_norm(const JetSamples& samples, int k) {
  NormEstimate best = sup_norm(samples, 0);
  for (int l = 1; l <= k; ++l) {
    NormEstimate e = sup_norm(samples, l);
    if (e.value > best.value) best = std::move(e);
  }
  return best;
}

NormEstimate hoelder_seminorm(const JetSamples& samples, int k, double alpha, std::size_t pair_budget) {
  check_alpha(alpha);
  return DifferenceTable(samples, k, pair_budget).seminorm(alpha);
}

NormEstimate hoelder_seminorm(const JetEvaluator& f, int k, double alpha, const SampleGrid& grid,
                              std::size_t pair_budget) {
  check_alpha(alpha);
  return hoelder_seminorm(JetSamples::evaluate(f, grid, k), k, alpha, pair_budget);
}

NormEstimate hoelder_norm(const JetSamples& samples, int k, double alpha, std::size_t pair_budget) {
  NormEstimate semi = hoelder_seminorm(samples, k, alpha, pair_budget);
  NormEstimate best = ck_norm(samples, k);
  if (semi.value > best.value) best = std::move(semi);
  best.kind = NormKind::full;
  best.level = k;
  best.alpha = alpha;
  return best;
}

NormEstimate hoelder_norm(const JetEvaluator& f, int k, double alpha, const SampleGrid& grid,
                          std::size_t pair_budget) {
  check_alpha(alpha);
  return hoelder_norm(JetSamples::evaluate(f, grid, k), k, alpha, pair_budget);
}

std::vector<std::string> norm_csv_header(int dim) {
  std::vector<std::string> h = {"kind", "level", "alpha", "value"};
  for (int i = 0; i < dim; ++i) h.push_back("witness_x" + std::to_string(i));
  for (int i = 0; i < dim; ++i) h.push_back("witness_y" + std::to_string(i));
  h.push_back("grid");
  return h;
}

std::vector<std::string> norm_csv_row(const NormEstimate& e, int dim) {
  std::vector<std::string> r = {to_string(e.kind), std::to_string(e.level), format_double(e.alpha),
                                format_double(e.value)};
  for (int i = 0; i < dim; ++i) r.push_back(format_double(e.witness.at(static_cast<std::size_t>(i))));
  for (int i = 0; i < dim; ++i) {
    r.push_back(e.witness_other ? format_double(e.witness_other->at(static_cast<std::size_t>(i))) : "");
  }
  r.push_back(e.grid_id);
  return r;
}

// ---------------------------------------------------------------- verifiers

InterpolationReport verify_interpolation(const JetSamples& samples, int n, double low, double mid, double high,
                                         std::size_t pair_budget) {
  if (!(0.0 < low && low < mid && mid < high && high <= 1.0)) {
    throw std::invalid_argument("interpolation requires 0 < alpha < beta < gamma <= 1");
  }
  const DifferenceTable table(samples, n, pair_budget);
  const double ck = ck_norm(samples, n).value;
  const double n_low = std::max(ck, table.seminorm(low).value);
  const double n_mid = std::max(ck, table.seminorm(mid).value);
  const double n_high = std::max(ck, table.seminorm(high).value);
  InterpolationReport r;
  r.mu = (high - mid) / (high - low);
  r.lhs = n_mid;
  r.rhs = std::pow(n_low, r.mu) * std::pow(n_high, 1.0 - r.mu);
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-12);
  return r;
}

InterpolationReport verify_interpolation(const JetEvaluator& f, int n, double low, double mid, double high,
                                         const SampleGrid& grid, std::size_t pair_budget) {
  return verify_interpolation(JetSamples::evaluate(f, grid, n), n, low, mid, high, pair_budget);
}

InclusionReport verify_inclusion(const JetEvaluator& f, int m, double alpha, int n, double beta,
                                 const SampleGrid& grid, std::size_t pair_budget) {
  check_alpha(alpha);
  check_alpha(beta);
  if (m < 0 || m + alpha > n + beta) throw std::invalid_argument("inclusion requires m + alpha <= n + beta");
  const JetSamples samples = JetSamples::evaluate(f, grid, n);
  InclusionReport r;
  r.lhs = hoelder_norm(samples, m, alpha, pair_budget).value;
  r.rhs = hoelder_norm(samples, n, beta, pair_budget).value;
  r.pass = r.lhs <= 2.0 * r.rhs + 1e-6 * r.rhs;
  return r;
}

// ---------------------------------------------------------------- moduli

Modulus Modulus::inverse_log() {
  const double cut = std::exp(-2.0);
  return {"inverse-log", [cut](double t) {
            if (t <= 0.0) return 0.0;
            if (t >= cut) return 0.5;
            return -1.0 / std::log(t);
          }};
}

Modulus Modulus::power(double exponent) {
  if (!(exponent > 0.0)) throw std::invalid_argument("power modulus needs a positive exponent");
  std::ostringstream name;
  name << "power:" << format_double(exponent);
  return {name.str(), [exponent](double t) { return t <= 0.0 ? 0.0 : std::pow(t, exponent); }};
}

ModulusValidation validate_modulus(const Modulus& omega, std::span<const double> t_samples) {
  ModulusValidation v;
  v.zero_at_origin = omega.eval(0.0) == 0.0;
  std::vector<double> ts(t_samples.begin(), t_samples.end());
  std::sort(ts.begin(), ts.end());
  v.nondecreasing = true;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (omega.eval(ts[i]) < omega.eval(ts[i - 1])) v.nondecreasing = false;
  }
  v.subadditive = true;
  for (double s : ts) {
    for (double t : ts) {
      if (omega.eval(s + t) > (omega.eval(s) + omega.eval(t)) * (1.0 + 1e-12)) v.subadditive = false;
    }
  }
  return v;
}

std::vector<ModulusReport> modulus_check(const Modulus& omega, std::span<const double> gammas,
                                         std::span<const double> t_samples) {
  if (t_samples.size() < 2) throw std::invalid_argument("modulus check needs at least two t samples");
  const double cut = std::exp(-2.0);
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (!(t_samples[i] > 0.0 && t_samples[i] <= cut)) {
      throw std::invalid_argument("t samples must lie in (0, exp(-2)]");
    }
    if (i > 0 && !(t_samples[i] < t_samples[i - 1])) throw std::invalid_argument("t samples must decrease");
  }
  const std::size_t tail = std::max<std::size_t>(2, (t_samples.size() + 3) / 4);
  const std::size_t tail_start = t_samples.size() - std::min(tail, t_samples.size());

  std::vector<ModulusReport> out;
  for (double gamma : gammas) {
    if (!(gamma > 0.0)) throw std::invalid_argument("modulus exponents must be positive");
    ModulusReport r;
    r.gamma = gamma;
    r.min_ratio = std::numeric_limits<double>::infinity();
    std::vector<double> ratio(t_samples.size());
    for (std::size_t i = 0; i < t_samples.size(); ++i) {
      ratio[i] = omega.eval(t_samples[i]) / std::pow(t_samples[i], gamma);
      r.min_ratio = std::min(r.min_ratio, ratio[i]);
    }
    r.final_ratio = ratio.back();
    r.tail_nondecreasing = true;
    for (std::size_t i = tail_start + 1; i < ratio.size(); ++i) {
      if (ratio[i] < ratio[i - 1] * (1.0 - 1e-12)) r.tail_nondecreasing = false;
    }
    r.pass = r.tail_nondecreasing && r.min_ratio > 0.0;
    out.push_back(r);
  }
  return out;
}

std::vector<double> dyadic_samples(int first, int last) {
  if (first > last) throw std::invalid_argument("dyadic range is empty");
  std::vector<double> out;
  for (int k = first; k <= last; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

}  // namespace holoflow
