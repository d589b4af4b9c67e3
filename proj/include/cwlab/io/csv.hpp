#pragma once

// CSV output with a '#'-prefixed metadata header. Numbers are written with
// 17 significant digits so files round-trip and compare byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cwlab/error.hpp"

namespace cwlab::io {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Cell = std::variant<long long, double, std::string>;

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
  void add_meta(const std::string& key, double value) { meta_.emplace_back(key, format_double(value)); }

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size())
      throw DimensionError("csv row has " + std::to_string(row.size()) + " cells, expected " +
                           std::to_string(columns_.size()));
    rows_.push_back(std::move(row));
  }

  std::size_t rows() const noexcept { return rows_.size(); }

  std::string str() const {
    std::ostringstream os;
    for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_cell(r[i]);
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<Cell>> rows_;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'" + (ec ? ": " + ec.message() : ""));
}

}  // namespace cwlab::io
