#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "holoflow/csv.hpp"
#include "holoflow/fields.hpp"
#include "holoflow/hoelder.hpp"

namespace holoflow::cli {

/// Every flag any subcommand understands. Each subcommand registers the
/// subset it uses, with its own defaults.
struct Params {
  int n = 1;
  double beta = 0.5;
  double alpha = 0.5;
  double gamma = 0.7;
  int d = 1;
  int grid = 0;  // points per axis; 0 means the subcommand default
  std::string box;
  std::size_t pairs = kDefaultPairBudget;
  int steps = 256;
  std::uint64_t seed = 1;
  std::string out;

  int m = 0;
  int count = 0;
  int trials = 0;
  int stride = 0;
  double tol = 0.0;
  bool polygon_check = false;
  std::string k, s, t, eps, field, phi, w, w_smooth, gammas, modulus, expect, checks, shifts;
  std::string n_list, beta_list, d_list, k_range;
};

enum CommonFlag : unsigned {
  kFlagN = 1u << 0,
  kFlagBeta = 1u << 1,
  kFlagAlpha = 1u << 2,
  kFlagGamma = 1u << 3,
  kFlagD = 1u << 4,
  kFlagGrid = 1u << 5,
  kFlagBox = 1u << 6,
  kFlagPairs = 1u << 7,
  kFlagSteps = 1u << 8,
  kFlagSeed = 1u << 9,
};

struct Io {
  std::ostream& csv;
  std::ostream& err;
};

struct Command {
  std::string name;
  std::string summary;
  unsigned flags = 0;
  /// Registers flags beyond the common ones and sets the subcommand defaults.
  std::function<void(CLI::App&, Params&)> setup;
  std::function<int(const Params&, Io&)> run;
  /// Enforce 0 < alpha <= beta <= 1 when both flags are present.
  bool alpha_below_beta = true;
};

/// Collects failed assertions; finish() prints the verdict and returns the exit code.
class Verdict {
 public:
  explicit Verdict(std::string command) : command_(std::move(command)) {}
  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  bool ok() const { return failures_.empty(); }
  int finish(std::ostream& err, const std::string& summary) const;

 private:
  std::string command_;
  std::vector<std::string> failures_;
};

void add_common(CLI::App& app, Params& p, unsigned flags);

std::vector<double> parse_doubles(const std::string& text, const std::string& flag);
std::vector<int> parse_ints(const std::string& text, const std::string& flag);
/// "lo:hi" or "lo:hi,lo:hi,...": one interval per axis, or one for all axes.
Box parse_box(const std::string& text, int dim);
SampleGrid make_grid(const Params& p, const Box& fallback, int fallback_points);

/// 2^-first, ..., 2^-last.
std::vector<double> dyadic(int first, int last);
std::string join(const std::vector<double>& v);

/// Deterministic uniform draws independent of the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

struct Mixture {
  JetEvaluator field;
  std::string label;
};

/// `bumps` Gaussian bumps R^d -> R^d with amplitudes in [-amp, amp], centers in
/// [-1, 1]^d and widths in [sigma_lo, sigma_hi].
Mixture random_mixture(Rng& rng, int dim, int order, int bumps, double amp, double sigma_lo, double sigma_hi);

std::string fmt(double v);
/// %.6g, for human-readable verdict lines.
std::string brief(double v);

std::vector<Command> analysis_commands();
std::vector<Command> group_commands();
std::vector<Command> flow_commands();
std::vector<Command> pathology_commands();

}  // namespace holoflow::cli
