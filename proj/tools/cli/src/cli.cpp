#include "holoflow/cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <fstream>
#include <ostream>
#include <sstream>

#include "command.hpp"
#include "holoflow/cli/config.hpp"
#include "holoflow/error.hpp"

namespace holoflow::cli {

// ---------------------------------------------------------------- helpers

int Verdict::finish(std::ostream& err, const std::string& summary) const {
  if (failures_.empty()) {
    err << "PASS " << command_ << ": " << summary << "\n";
    return kExitOk;
  }
  for (const auto& f : failures_) err << "FAIL " << command_ << ": " << f << "\n";
  err << "FAIL " << command_ << ": " << failures_.size() << " assertion(s) failed; " << summary << "\n";
  return kExitAssertion;
}

void add_common(CLI::App& app, Params& p, unsigned flags) {
  if (flags & kFlagN) app.add_option("--n", p.n, "derivative order")->check(CLI::Range(1, 5))->capture_default_str();
  if (flags & kFlagBeta) app.add_option("--beta", p.beta, "Hoelder exponent beta")->capture_default_str();
  if (flags & kFlagAlpha) app.add_option("--alpha", p.alpha, "Hoelder exponent alpha")->capture_default_str();
  if (flags & kFlagGamma) app.add_option("--gamma", p.gamma, "exponent gamma")->capture_default_str();
  if (flags & kFlagD) app.add_option("--d", p.d, "dimension")->check(CLI::Range(1, 3))->capture_default_str();
  if (flags & kFlagGrid) app.add_option("--grid", p.grid, "sample points per axis (0: default)")->capture_default_str();
  if (flags & kFlagBox) app.add_option("--box", p.box, "sample box lo:hi[,lo:hi...]");
  if (flags & kFlagPairs) app.add_option("--pairs", p.pairs, "pair budget per seminorm")->capture_default_str();
  if (flags & kFlagSteps) app.add_option("--steps", p.steps, "RK4 steps per unit time")->capture_default_str();
  if (flags & kFlagSeed) app.add_option("--seed", p.seed, "random seed")->capture_default_str();
  app.add_option("--out", p.out, "CSV output path (default: stdout)");
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size() || item.empty()) throw std::invalid_argument(flag + ": bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(flag + ": empty list");
  return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  for (double v : parse_doubles(text, flag)) {
    if (v != std::floor(v) || std::abs(v) > 1e9) throw std::invalid_argument(flag + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Box parse_box(const std::string& text, int dim) {
  std::vector<std::pair<double, double>> intervals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("--box: expected lo:hi, got '" + item + "'");
    const auto lo = parse_doubles(item.substr(0, colon), "--box");
    const auto hi = parse_doubles(item.substr(colon + 1), "--box");
    if (lo.size() != 1 || hi.size() != 1 || !(lo[0] < hi[0])) {
      throw std::invalid_argument("--box: need lo < hi in '" + item + "'");
    }
    intervals.emplace_back(lo[0], hi[0]);
  }
  if (intervals.size() != 1 && intervals.size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("--box: give one interval or one per axis");
  }
  Box b;
  for (int i = 0; i < dim; ++i) {
    const auto& iv = intervals[intervals.size() == 1 ? 0 : static_cast<std::size_t>(i)];
    b.lo.push_back(iv.first);
    b.hi.push_back(iv.second);
  }
  return b;
}

SampleGrid make_grid(const Params& p, const Box& fallback, int fallback_points) {
  const Box box = p.box.empty() ? fallback : parse_box(p.box, fallback.dim());
  const int points = p.grid > 0 ? p.grid : fallback_points;
  if (points < 2) throw std::invalid_argument("--grid needs at least 2 points per axis");
  return SampleGrid(box, points);
}

std::vector<double> dyadic(int first, int last) { return dyadic_samples(first, last); }

std::string fmt(double v) { return format_double(v); }

std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

Mixture random_mixture(Rng& rng, int dim, int order, int bumps, double amp, double sigma_lo, double sigma_hi) {
  std::vector<BumpSpec> specs;
  std::string label;
  for (int b = 0; b < bumps; ++b) {
    BumpSpec spec;
    spec.amplitude = rng.uniform(-amp, amp);
    for (int i = 0; i < dim; ++i) spec.center.push_back(rng.uniform(-1.0, 1.0));
    spec.sigma = rng.uniform(sigma_lo, sigma_hi);
    label += (b ? "+" : "") + std::string("gaussian:") + fmt(spec.amplitude) + ":";
    for (int i = 0; i < dim; ++i) label += (i ? "," : "") + fmt(spec.center[static_cast<std::size_t>(i)]);
    label += ":" + fmt(spec.sigma);
    specs.push_back(std::move(spec));
  }
  return {bump_mixture(dim, dim, order, specs), label};
}

// ---------------------------------------------------------------- dispatch

namespace {

const std::vector<Command>& registry() {
  static const std::vector<Command> commands = [] {
    std::vector<Command> all;
    for (auto part : {analysis_commands(), group_commands(), flow_commands(), pathology_commands()}) {
      for (auto& c : part) all.push_back(std::move(c));
    }
    return all;
  }();
  return commands;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : registry()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void usage(std::ostream& os) {
  os << "usage: holoflow <command> [--flag value ...] [--config file]\n\ncommands:\n";
  std::size_t width = 0;
  for (const auto& c : registry()) width = std::max(width, c.name.size());
  for (const auto& c : registry()) {
    os << "  " << c.name << std::string(width + 2 - c.name.size(), ' ') << c.summary << "\n";
  }
  os << "\nRun 'holoflow <command> --help' for the flags of one command.\n"
        "Exit status: 0 all assertions pass, 1 an assertion failed, 2 usage error.\n";
}

/// Fresh app for one command, bound to `p`.
std::unique_ptr<CLI::App> build_app(const Command& cmd, Params& p, std::string& config_path) {
  auto app = std::make_unique<CLI::App>(cmd.summary, "holoflow " + cmd.name);
  app->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  add_common(*app, p, cmd.flags);
  if (cmd.setup) cmd.setup(*app, p);
  app->add_option("--config", config_path, "key=value file; command-line flags take precedence");
  return app;
}

std::string find_config_arg(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  return path;
}

void parse_into(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
  app.parse(args);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    usage(err);
    return kExitUsage;
  }
  if (args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    usage(out);
    return kExitOk;
  }
  const Command* cmd = find_command(args[0]);
  if (!cmd) {
    err << "unknown command '" << args[0] << "'\n";
    usage(err);
    return kExitUsage;
  }
  const std::vector<std::string> rest(args.begin() + 1, args.end());

  Params p;
  std::string config_path;
  try {
    std::vector<std::string> merged;
    const std::string cfg_file = find_config_arg(rest);
    if (!cfg_file.empty()) {
      const Config cfg = read_config(cfg_file);
      for (const auto& [key, entry] : cfg) {
        const std::string where = cfg_file + ":" + std::to_string(entry.line) + ": ";
        if (key == "config") throw ConfigError(where + "nested config files are not supported");
        Params scratch;
        std::string ignored;
        auto probe = build_app(*cmd, scratch, ignored);
        if (!probe->get_option_no_throw("--" + key)) throw ConfigError(where + "unknown key '" + key + "'");
        try {
          parse_into(*probe, {"--" + key + "=" + entry.value});
        } catch (const CLI::ParseError& e) {
          throw ConfigError(where + key + ": " + e.what());
        }
        merged.push_back("--" + key + "=" + entry.value);
      }
    }
    merged.insert(merged.end(), rest.begin(), rest.end());
    auto app = build_app(*cmd, p, config_path);
    try {
      parse_into(*app, merged);
    } catch (const CLI::CallForHelp&) {
      out << app->help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "holoflow " << cmd->name << ": " << e.what() << "\n";
      err << "Run 'holoflow " << cmd->name << " --help' for usage.\n";
      return kExitUsage;
    }
    if ((cmd->flags & kFlagAlpha) && !(p.alpha > 0.0 && p.alpha <= 1.0)) {
      throw std::invalid_argument("--alpha must lie in (0, 1]");
    }
    if ((cmd->flags & kFlagBeta) && !(p.beta > 0.0 && p.beta <= 1.0)) {
      throw std::invalid_argument("--beta must lie in (0, 1]");
    }
    if (cmd->alpha_below_beta && (cmd->flags & kFlagAlpha) && (cmd->flags & kFlagBeta) && !(p.alpha <= p.beta)) {
      throw std::invalid_argument("need alpha <= beta");
    }
    if ((cmd->flags & kFlagSteps) && p.steps < 1) throw std::invalid_argument("--steps must be positive");
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "holoflow " << cmd->name << ": invalid argument: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ofstream file;
  if (!p.out.empty()) {
    file.open(p.out, std::ios::binary);
    if (!file) {
      err << "holoflow " << cmd->name << ": cannot open '" << p.out << "' for writing\n";
      return kExitUsage;
    }
  }
  Io io{p.out.empty() ? out : file, err};
  try {
    return cmd->run(p, io);
  } catch (const std::invalid_argument& e) {
    err << "holoflow " << cmd->name << ": invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "FAIL " << cmd->name << ": " << to_string(e.code()) << ": " << e.what();
    if (e.index()) err << " (item " << *e.index() << ")";
    err << "\n";
    return kExitAssertion;
  } catch (const std::exception& e) {
    err << "FAIL " << cmd->name << ": " << e.what() << "\n";
    return kExitAssertion;
  }
}

}  // namespace holoflow::cli
