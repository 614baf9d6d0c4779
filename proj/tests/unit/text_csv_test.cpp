#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "segservo/csv.hpp"
#include "segservo/error.hpp"
#include "segservo/numeric_text.hpp"

using namespace segservo;

TEST(NumericText, FormatsShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-0.0012789610546275199), "-0.0012789610546275199");
  EXPECT_EQ(format_double(320.0), "320");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(NumericTextProperty, RandomBitPatternsRoundTrip) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t bits = rng();
    double value;
    std::memcpy(&value, &bits, sizeof value);
    if (!std::isfinite(value)) continue;
    const double back = parse_double(format_double(value));
    ASSERT_EQ(std::memcmp(&back, &value, sizeof value), 0) << format_double(value);
  }
}

TEST(NumericText, StrictParsing) {
  EXPECT_EQ(parse_double(" 2.5 "), 2.5);
  EXPECT_EQ(parse_int("-42"), -42);
  for (const char* bad : {"", "1.5x", "abc", "1 2"}) {
    EXPECT_THROW(parse_double(bad), Error) << bad;
  }
  EXPECT_THROW(parse_int("3.0"), Error);
}

TEST(NumericText, Split) {
  EXPECT_EQ(split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(split_whitespace("  a \t b  "), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(trim("  x "), "x");
}

TEST(Csv, RoundTripWithComments) {
  CsvTable t;
  t.comments = {" provenance line"};
  t.header = {"step", "value", "note"};
  t.rows = {{"0", "1.5", ""}, {"1", "-2", "reset;limit_clamp"}};
  std::stringstream s;
  write_csv(s, t);
  const CsvTable back = read_csv(s);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.comments, t.comments);
  EXPECT_EQ(back.column("note"), 2u);
  EXPECT_FALSE(back.has_column("missing"));
  EXPECT_THROW(back.column("missing"), Error);
}

TEST(Csv, RejectsRaggedRows) {
  std::stringstream s("a,b\n1,2,3\n");
  EXPECT_THROW(read_csv(s), Error);
}

TEST(Csv, GnuplotMarksEmptyFields) {
  CsvTable t;
  t.header = {"x", "y"};
  t.rows = {{"1", ""}};
  const auto path = std::filesystem::temp_directory_path() / "segservo_gnuplot_test.dat";
  save_gnuplot(path, t);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_NE(text.str().find("1 ?"), std::string::npos);
  std::filesystem::remove(path);
}
