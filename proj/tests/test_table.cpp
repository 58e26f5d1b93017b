#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "gridconc/table.hpp"

using namespace gridconc;

namespace {

// std::stod rejects subnormal results, strtod does not.
double parse(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

TEST(Table, EmptyTableIsHeaderOnly) {
  Table t({"a", "b"});
  std::ostringstream out;
  write_csv(t, out);
  EXPECT_EQ(out.str(), "a,b\r\n");
  std::ostringstream js;
  write_json(t, js);
  EXPECT_TRUE(nlohmann::json::parse(js.str()).empty());
}

TEST(Table, RowLengthChecked) {
  Table t({"a", "b"});
  EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
  EXPECT_THROW(t.at(0, "a"), std::out_of_range);
  t.add_row({1.0, true});
  EXPECT_THROW(t.column_index("c"), std::out_of_range);
  EXPECT_EQ(t.number(0, "b"), 1.0);
  EXPECT_TRUE(t.flag(0, "b"));
}

TEST(Table, CsvQuotingAndRoundTrip) {
  Table t({"name", "x", "k", "ok", "blank"});
  t.add_row({std::string("a,\"b\"\nc"), 0.1, std::int64_t{-7}, false, std::monostate{}});
  t.add_row({std::string("plain"), 1.0 / 3.0, std::int64_t{42}, true, std::monostate{}});
  std::stringstream io;
  write_csv(t, io);
  const auto doc = read_csv(io);
  ASSERT_EQ(doc.header, t.columns());
  ASSERT_EQ(doc.rows.size(), 2u);
  EXPECT_EQ(doc.rows[0][0], "a,\"b\"\nc");
  EXPECT_EQ(parse(doc.rows[0][1]), 0.1);
  EXPECT_EQ(parse(doc.rows[1][1]), 1.0 / 3.0);
  EXPECT_EQ(doc.rows[0][2], "-7");
  EXPECT_EQ(doc.rows[0][3], "false");
  EXPECT_EQ(doc.rows[0][4], "");
}

TEST(Table, DoublesRoundTripBitForBit) {
  Table t({"v"});
  const std::vector<double> values{0.1, 1e-300, 123456789.123456789, -2.5e17, 5e-324, 0.0};
  for (double v : values) t.add_row({v});
  std::stringstream csv;
  write_csv(t, csv);
  const auto doc = read_csv(csv);
  std::stringstream js;
  write_json(t, js);
  const auto arr = nlohmann::json::parse(js.str());
  for (std::size_t i = 0; i < values.size(); ++i) {
    EXPECT_EQ(parse(doc.rows[i][0]), values[i]);
    EXPECT_EQ(arr[i]["v"].get<double>(), values[i]);
  }
}

TEST(Table, JsonObjectsUseColumnNames) {
  Table t({"p", "flag", "label", "gap"});
  t.add_row({0.5, true, std::string("x"), std::monostate{}});
  std::stringstream js;
  write_json(t, js);
  const auto arr = nlohmann::json::parse(js.str());
  ASSERT_EQ(arr.size(), 1u);
  EXPECT_EQ(arr[0]["p"], 0.5);
  EXPECT_EQ(arr[0]["flag"], true);
  EXPECT_EQ(arr[0]["label"], "x");
  EXPECT_TRUE(arr[0]["gap"].is_null());
}

TEST(Table, EmitToFileAndFailure) {
  Table t({"a"});
  t.add_row({std::int64_t{1}});
  const auto path = std::filesystem::temp_directory_path() / "gridconc_table_test.csv";
  emit(t, OutputFormat::csv, path);
  std::ifstream in(path);
  const auto doc = read_csv(in);
  EXPECT_EQ(doc.rows.at(0).at(0), "1");
  std::filesystem::remove(path);
  EXPECT_THROW(emit(t, OutputFormat::csv, std::filesystem::path("/nonexistent/dir/out.csv")), std::runtime_error);
}

TEST(Table, ParseFormatAndUnterminatedQuote) {
  EXPECT_EQ(parse_output_format("csv"), OutputFormat::csv);
  EXPECT_EQ(parse_output_format("json"), OutputFormat::json);
  EXPECT_THROW(parse_output_format("xml"), std::invalid_argument);
  std::istringstream bad("a\n\"oops\n");
  EXPECT_THROW(read_csv(bad), std::runtime_error);
}
