#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "holoflow/field.hpp"

namespace holoflow {

struct PointPair {
  Point x;
  Point y;
};

/// A lattice of query points over a box plus caller-supplied pairs that every
/// seminorm scan must include. Copies share the point storage.
class SampleGrid {
 public:
  SampleGrid(Box box, int points_per_axis, std::vector<PointPair> mandatory_pairs = {});

  /// Default density: 4001 points per axis for d = 1, 201 for d = 2, 41 for d = 3.
  static int default_points_per_axis(int dim);
  static SampleGrid over(const Box& box, std::vector<PointPair> mandatory_pairs = {});

  const Box& box() const { return data_->box; }
  int dim() const { return data_->box.dim(); }
  int points_per_axis() const { return data_->points_per_axis; }
  std::size_t lattice_size() const { return data_->lattice_size; }
  /// Lattice points (last axis fastest) followed by the endpoints of each
  /// mandatory pair: pair p lives at lattice_size() + 2p and + 2p + 1.
  const std::vector<Point>& points() const { return data_->points; }
  const std::vector<PointPair>& mandatory_pairs() const { return data_->pairs; }
  const std::string& id() const { return data_->id; }

  SampleGrid with_pairs(std::vector<PointPair> mandatory_pairs) const;

 private:
  struct Data {
    Box box;
    int points_per_axis;
    std::size_t lattice_size;
    std::vector<Point> points;
    std::vector<PointPair> pairs;
    std::string id;
  };
  std::shared_ptr<const Data> data_;
};

/// Jets of one field at every point of a grid.
class JetSamples {
 public:
  JetSamples(SampleGrid grid, std::vector<Jet> jets);

  static JetSamples evaluate(const JetEvaluator& f, const SampleGrid& grid, int order);

  const SampleGrid& grid() const { return grid_; }
  const std::vector<Jet>& jets() const { return jets_; }
  int order() const;

  JetSamples scaled(double c) const;
  JetSamples operator-(const JetSamples& other) const;
  JetSamples operator+(const JetSamples& other) const;

 private:
  SampleGrid grid_;
  std::vector<Jet> jets_;
};

enum class NormKind { sup_level, seminorm, full };

std::string to_string(NormKind kind);

/// A sampled norm value together with the point (or pair) attaining it. Every
/// estimate is a lower bound of the true supremum.
struct NormEstimate {
  NormKind kind = NormKind::sup_level;
  int level = 0;
  double alpha = 0.0;
  double value = 0.0;
  Point witness;
  std::optional<Point> witness_other;
  std::string grid_id;
};

inline constexpr std::size_t kDefaultPairBudget = std::size_t{1} << 18;
/// Maximum number of lattice points in the all-pairs coarse subsample.
inline constexpr std::size_t kCoarseSubsampleLimit = 512;

/// Pair indices into grid.points(): mandatory pairs, then adjacent lattice
/// neighbours along each axis, then all pairs of a coarse subsample,
/// truncated at `budget`. Throws if budget cannot hold the mandatory pairs.
std::vector<std::pair<std::size_t, std::size_t>> select_pairs(const SampleGrid& grid, std::size_t budget);

/// Per-pair distances |x - y| and ||f^{(k)}(x) - f^{(k)}(y)|| for one level, so
/// that seminorms at several exponents share one sample set.
class DifferenceTable {
 public:
  DifferenceTable(const JetSamples& samples, int level, std::size_t pair_budget = kDefaultPairBudget);

  int level() const { return level_; }
  std::size_t size() const { return distance_.size(); }
  NormEstimate seminorm(double alpha) const;

 private:
  SampleGrid grid_;
  int level_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<double> distance_;
  std::vector<double> delta_;
};

NormEstimate sup_norm(const JetSamples& samples, int level);
NormEstimate sup_norm(const JetEvaluator& f, int level, const SampleGrid& grid);

NormEstimate hoelder_seminorm(const JetSamples& samples, int k, double alpha,
                              std::size_t pair_budget = kDefaultPairBudget);
NormEstimate hoelder_seminorm(const JetEvaluator& f, int k, double alpha, const SampleGrid& grid,
                              std::size_t pair_budget = kDefaultPairBudget);

/// max { sup_norm(l) for l <= k, hoelder_seminorm(k, alpha) }.
NormEstimate hoelder_norm(const JetSamples& samples, int k, double alpha,
                          std::size_t pair_budget = kDefaultPairBudget);
NormEstimate hoelder_norm(const JetEvaluator& f, int k, double alpha, const SampleGrid& grid,
                          std::size_t pair_budget = kDefaultPairBudget);

/// Columns kind, level, alpha, value, witness_x0.., witness_y0.., grid.
std::vector<std::string> norm_csv_header(int dim);
std::vector<std::string> norm_csv_row(const NormEstimate& e, int dim);

/// max over l <= k of sup_norm(l), i.e. the C^k norm estimate.
NormEstimate ck_norm(const JetSamples& samples, int k);

struct InterpolationReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double mu = 0.0;
  bool pass = false;
};

/// ||f||_{n,mid} <= ||f||_{n,low}^mu ||f||_{n,high}^{1-mu}, mu = (high-mid)/(high-low),
/// all three norms on one matched sample set. Requires 0 < low < mid < high <= 1.
InterpolationReport verify_interpolation(const JetSamples& samples, int n, double low, double mid,
                                         double high, std::size_t pair_budget = kDefaultPairBudget);
InterpolationReport verify_interpolation(const JetEvaluator& f, int n, double low, double mid, double high,
                                         const SampleGrid& grid, std::size_t pair_budget = kDefaultPairBudget);

struct InclusionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// ||f||_{m,alpha} <= 2 ||f||_{n,beta} + 1e-6 ||f||_{n,beta}, for m + alpha <= n + beta.
InclusionReport verify_inclusion(const JetEvaluator& f, int m, double alpha, int n, double beta,
                                 const SampleGrid& grid, std::size_t pair_budget = kDefaultPairBudget);

struct Modulus {
  std::string name;
  std::function<double(double)> eval;

  /// -1/log t on (0, e^{-2}), 1/2 for t >= e^{-2}, 0 at 0.
  static Modulus inverse_log();
  static Modulus power(double exponent);
};

struct ModulusValidation {
  bool zero_at_origin = false;
  bool nondecreasing = false;
  bool subadditive = false;
};

/// Spot checks omega(0) = 0, monotonicity and omega(s+t) <= omega(s)+omega(t) on samples.
ModulusValidation validate_modulus(const Modulus& omega, std::span<const double> t_samples);

struct ModulusReport {
  double gamma = 0.0;
  double min_ratio = 0.0;
  double final_ratio = 0.0;
  /// omega(t)/t^gamma is nondecreasing as t decreases over the trailing quarter
  /// (at least two) of the samples.
  bool tail_nondecreasing = false;
  bool pass = false;
};

/// Ratios omega(t)/t^gamma for decreasing t in (0, e^{-2}].
std::vector<ModulusReport> modulus_check(const Modulus& omega, std::span<const double> gammas,
                                         std::span<const double> t_samples);

/// 2^{-k} for k = first..last.
std::vector<double> dyadic_samples(int first, int last);

}  // namespace holoflow
