#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "holoflow/csv.hpp"

using namespace holoflow;

TEST(Csv, FormatDouble) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(std::stod(format_double(std::acos(-1.0))), std::acos(-1.0));
}

TEST(Csv, Quoting) {
  EXPECT_EQ(csv_quote("plain"), "plain");
  EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_quote("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, TableWritesHeaderAndRows) {
  CsvTable t;
  t.header = {"a", "b"};
  t.add_row({"1", "x,y"});
  EXPECT_THROW(t.add_row({"1"}), std::invalid_argument);
  std::ostringstream os;
  t.write(os);
  EXPECT_EQ(os.str(), "a,b\n1,\"x,y\"\n");
}
