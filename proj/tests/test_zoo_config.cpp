#include <gtest/gtest.h>

#include <cmath>

#include "holoflow/cli/config.hpp"
#include "holoflow/cli/zoo.hpp"

using namespace holoflow;
using cli::parse_config;
using cli::parse_field;

namespace {

double value_at(const JetEvaluator& f, double x) {
  const Point p(static_cast<std::size_t>(f.dim_in()), x);
  return f(p, 0).value()[0];
}

}  // namespace

TEST(Zoo, AtomsAndLinearCombinations) {
  EXPECT_EQ(value_at(parse_field("zero", 1, 2), 0.3), 0.0);
  EXPECT_DOUBLE_EQ(value_at(parse_field("gaussian:0.5", 1, 1), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(value_at(parse_field("gaussian:1:0.2:0.5", 1, 1), 0.2), 1.0);
  EXPECT_DOUBLE_EQ(value_at(parse_field("plateau-shift:0.3", 1, 1), 0.1), 0.3);
  EXPECT_DOUBLE_EQ(value_at(parse_field("linear:0.5", 1, 1), 0.4), 0.2);
  EXPECT_DOUBLE_EQ(value_at(parse_field("chi", 1, 1), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(value_at(parse_field("psi:1:0.5", 1, 1), 0.25), std::pow(0.25, 1.5));
  EXPECT_DOUBLE_EQ(value_at(parse_field("2*gaussian:0.5 + -0.5*plateau-shift:1", 1, 1), 0.0), 0.5);
  EXPECT_DOUBLE_EQ(value_at(parse_field("1e-1*gaussian:1", 1, 1), 0.0), 0.1);
}

TEST(Zoo, MultiDimensionalFields) {
  const JetEvaluator f = parse_field("gaussian:1:0.5", 2, 1);
  EXPECT_EQ(f.dim_in(), 2);
  EXPECT_EQ(f.dim_out(), 2);
  const Point c{0.5, 0.5};
  EXPECT_GT(f(c, 0).value()[0], 0.0);
}

TEST(Zoo, Errors) {
  EXPECT_THROW(parse_field("", 1, 1), std::invalid_argument);
  EXPECT_THROW(parse_field("wave:1", 1, 1), std::invalid_argument);
  EXPECT_THROW(parse_field("gaussian:x", 1, 1), std::invalid_argument);
  EXPECT_THROW(parse_field("gaussian:1 + ", 1, 1), std::invalid_argument);
  EXPECT_THROW(parse_field("psi:1:0.5", 2, 1), std::invalid_argument);
  EXPECT_THROW(parse_field("psi:1:0.5", 1, 2), std::invalid_argument);
  EXPECT_THROW(parse_field("psi:1:1.5", 1, 1), std::invalid_argument);
}

TEST(Config, ParsesKeysValuesAndLines) {
  const cli::Config c = parse_config("# header\n\nsteps = 64\n--alpha=0.3  # trailing\nfield=gaussian:1\n", "test");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.at("steps").value, "64");
  EXPECT_EQ(c.at("steps").line, 3);
  EXPECT_EQ(c.at("alpha").value, "0.3");
  EXPECT_EQ(c.at("field").value, "gaussian:1");
}

TEST(Config, RejectsMalformedInput) {
  try {
    parse_config("a=1\nnoequals\n", "cfg");
    FAIL();
  } catch (const cli::ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("cfg:2:", 0), 0u) << e.what();
  }
  EXPECT_THROW(parse_config("=1\n", "cfg"), cli::ConfigError);
  EXPECT_THROW(parse_config("a=\n", "cfg"), cli::ConfigError);
  EXPECT_THROW(parse_config("a=1\na=2\n", "cfg"), cli::ConfigError);
  EXPECT_THROW(cli::read_config("/nonexistent/holoflow.cfg"), cli::ConfigError);
}
