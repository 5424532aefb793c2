#pragma once

// Machine-readable outputs: CSV with a header row, LF endings and 17
// significant digits; JSON with stable key order.

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace alab {

inline constexpr int kCsvSchemaVersion = 1;

/// "%.17g".
std::string format_double(double v);

/// Rows are buffered and written in one go by write().
class CsvTable {
 public:
  /// A leading schema_version column is added automatically.
  explicit CsvTable(std::vector<std::string> columns);

  class Row {
   public:
    Row& add(double v);
    Row& add(std::int64_t v);
    Row& add(int v) { return add(static_cast<std::int64_t>(v)); }
    Row& add(std::size_t v) { return add(static_cast<std::int64_t>(v)); }

   private:
    friend class CsvTable;
    std::vector<std::string> cells_;
  };

  Row& row();
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<Row> rows_;
};

/// Parsed CSV: header names and string cells.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; -1 if absent.
  int column(std::string_view name) const;
};

CsvData read_csv(const std::filesystem::path& path);

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path);

}  // namespace alab
