// Runs every acceptance criterion as one CLI invocation and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "holoflow/cli/cli.hpp"

namespace {

struct Criterion {
  int id;
  std::string name;
  std::vector<std::string> args;
  double budget_s;
  std::size_t min_rows;
};

std::size_t count_rows(const std::string& csv) {
  std::size_t n = 0;
  for (char c : csv) n += c == '\n';
  return n == 0 ? 0 : n - 1;
}

std::string last_line(const std::string& text) {
  std::istringstream is(text);
  std::string line, last;
  while (std::getline(is, line))
    if (!line.empty()) last = line;
  return last;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "disc pathology", {"disc", "--n", "1", "--beta", "0.5", "--k", "10,100,1000,10000"}, 5, 4},
      {2, "optimal exponent", {"optimal", "--beta", "0.9", "--alpha", "0.3", "--gamma", "0.7"}, 1, 9},
      {3, "non-separability", {"separability", "--n", "1,2", "--beta", "0.5,1"}, 5, 4 * 45},
      {4, "interpolation inequality", {"interpolation"}, 60, 100},
      {5, "composition bound", {"compose-bound"}, 60, 100},
      {6, "inverse matrix bound", {"matrix-bound"}, 1, 3000},
      {7, "inversion", {"invert"}, 30, 20},
      {8, "inversion continuity", {"inv-holder"}, 60, 8},
      {9, "flow integrator", {"flow", "--checks", "all"}, 60, 5},
      {10, "gronwall monitors", {"gronwall", "--checks", "all"}, 60, 14},
      {11, "flow-map exponent", {"flowmap-exponent", "--n", "2", "--beta", "0.9", "--alpha", "0.3"}, 300, 8},
      {12,
       "segment round trip",
       {"trouve-roundtrip", "--phi", "gaussian:0.1", "--steps", "4096", "--n", "1", "--alpha", "0.3",
        "--polygon-check"},
       120,
       1},
      {13, "jet engine", {"jets"}, 30, 120},
      {14, "modulus", {"modulus", "--checks", "all"}, 1, 5},
  };

  int failures = 0;
  double flow_pair_s = 0.0;
  for (const auto& c : criteria) {
    std::ostringstream out, err;
    const auto t0 = std::chrono::steady_clock::now();
    const int code = holoflow::cli::run(c.args, out, err);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.id == 9 || c.id == 10) flow_pair_s += secs;

    std::string why;
    if (code != 0) why = "exit " + std::to_string(code) + ": " + last_line(err.str());
    else if (secs > c.budget_s) why = "took longer than " + std::to_string(c.budget_s) + " s";
    else if (count_rows(out.str()) < c.min_rows) why = "only " + std::to_string(count_rows(out.str())) + " csv rows";

    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    if (why.empty()) {
      std::cout << "PASS criterion " << c.id << ": " << c.name << " (" << timing << ")\n";
    } else {
      ++failures;
      std::cout << "FAIL criterion " << c.id << ": " << c.name << ": " << why << " (" << timing << ")\n";
    }
    std::cout.flush();
  }
  if (flow_pair_s > 60.0) {
    ++failures;
    std::cout << "FAIL criteria 9+10 exceed the shared 60 s budget\n";
  }
  return failures == 0 ? 0 : 1;
}
