#include "alab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "alab/errors.hpp"

namespace alab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) {
  columns_.reserve(columns.size() + 1);
  columns_.emplace_back("schema_version");
  for (auto& c : columns) columns_.push_back(std::move(c));
}

CsvTable::Row& CsvTable::Row::add(double v) {
  cells_.push_back(format_double(v));
  return *this;
}

CsvTable::Row& CsvTable::Row::add(std::int64_t v) {
  cells_.push_back(std::to_string(v));
  return *this;
}

CsvTable::Row& CsvTable::row() {
  rows_.emplace_back();
  rows_.back().add(kCsvSchemaVersion);
  return rows_.back();
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const Row& r : rows_) {
    for (std::size_t i = 0; i < r.cells_.size(); ++i) {
      if (i) out += ',';
      out += r.cells_[i];
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << str();
}

int CsvData::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  CsvData data;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV file " + path.string());
  data.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    data.rows.push_back(split(line));
    if (data.rows.back().size() != data.header.size())
      throw ConfigError("ragged CSV row in " + path.string());
  }
  return data;
}

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace alab
