#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace gridconc {

/// monostate is an empty field (CSV) / null (JSON).
using Cell = std::variant<std::monostate, std::int64_t, double, bool, std::string>;

/// Column-named record table; every row has one cell per column.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  /// Throws std::out_of_range for an unknown column.
  std::size_t column_index(const std::string& name) const;
  const Cell& at(std::size_t row, const std::string& column) const;
  /// Numeric cell as double (int64, double and bool convert).
  double number(std::size_t row, const std::string& column) const;
  bool flag(std::size_t row, const std::string& column) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(const std::string& name);

/// 17 significant digits, so a parse of the text recovers the double exactly.
std::string format_double(double value);

/// RFC 4180: comma separated, CRLF line ends, header row first, fields with
/// commas, quotes or line breaks quoted with doubled quotes.
void write_csv(const Table& table, std::ostream& out);

/// Array of objects keyed by column name.
void write_json(const Table& table, std::ostream& out);

/// Writes to `path`; throws std::runtime_error on I/O failure.
void emit(const Table& table, OutputFormat format, const std::filesystem::path& path);
void emit(const Table& table, OutputFormat format, std::ostream& out);

struct CsvDocument {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Parses RFC 4180 text (accepts LF or CRLF). Throws std::runtime_error on
/// an unterminated quoted field.
CsvDocument read_csv(std::istream& in);

}  // namespace gridconc
