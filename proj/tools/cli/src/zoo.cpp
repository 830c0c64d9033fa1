#include "holoflow/cli/zoo.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace holoflow::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // Keep exponents such as 1e+3 intact when splitting on '+'.
    const bool exponent = sep == '+' && i > 0 && (s[i - 1] == 'e' || s[i - 1] == 'E') && i >= 2 &&
                          (std::isdigit(static_cast<unsigned char>(s[i - 2])) || s[i - 2] == '.');
    if (s[i] == sep && !exponent) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += s[i];
    }
  }
  parts.push_back(cur);
  return parts;
}

double number(const std::string& s, const std::string& term) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("field term '" + term + "': bad number '" + s + "'");
  return v;
}

JetEvaluator atom(const std::string& text, int dim, int order) {
  const auto p = split(text, ':');
  const std::string& name = p[0];
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi) throw std::invalid_argument("field term '" + text + "': wrong number of parameters");
  };
  if (name == "zero") {
    need(1, 1);
    return zero_field(dim, dim, order);
  }
  if (name == "chi") {
    need(1, 1);
    if (dim == 1) return cutoff_field(1, order);
    return plateau_shift(dim, order, std::vector<double>(static_cast<std::size_t>(dim), 1.0));
  }
  if (name == "plateau-shift") {
    need(2, 2);
    return plateau_shift(dim, order, std::vector<double>(static_cast<std::size_t>(dim), number(p[1], text)));
  }
  if (name == "gaussian") {
    need(2, 4);
    const double amp = number(p[1], text);
    Point center(static_cast<std::size_t>(dim), p.size() >= 3 ? number(p[2], text) : 0.0);
    const double sigma = p.size() >= 4 ? number(p[3], text) : 1.0;
    return gaussian_field(dim, dim, order, amp, center, sigma);
  }
  if (name == "linear") {
    need(2, 2);
    return linear_field(dim, order, number(p[1], text));
  }
  if (name == "psi") {
    need(3, 3);
    if (dim != 1) throw std::invalid_argument("field term '" + text + "': psi is only defined for d = 1");
    const double n = number(p[1], text);
    if (n != static_cast<int>(n)) throw std::invalid_argument("field term '" + text + "': n must be an integer");
    if (static_cast<int>(n) < order) {
      throw std::invalid_argument("field term '" + text + "': psi has jets only up to order " + p[1]);
    }
    return psi_field(static_cast<int>(n), number(p[2], text));
  }
  throw std::invalid_argument("unknown field '" + name + "'");
}

}  // namespace

JetEvaluator parse_field(const std::string& spec, int dim, int order) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  std::string compact;
  std::copy_if(spec.begin(), spec.end(), std::back_inserter(compact), [](char c) { return c != ' '; });
  if (compact.empty()) throw std::invalid_argument("empty field specification");
  std::optional<JetEvaluator> acc;
  for (const auto& term : split(compact, '+')) {
    if (term.empty()) throw std::invalid_argument("empty term in field '" + spec + "'");
    const auto star = term.find('*');
    JetEvaluator f = star == std::string::npos
                         ? atom(term, dim, order)
                         : scaled(atom(term.substr(star + 1), dim, order), number(term.substr(0, star), term));
    acc = acc ? sum(*acc, f) : f;
  }
  return *acc;
}

}  // namespace holoflow::cli
