#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "cdpw/cli.hpp"

namespace cdpw::cli {
namespace {

std::string format_double(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return buf;
}

std::string csv_cell(const Cell& c, int precision) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + "\"";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v, precision);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

std::string json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return nlohmann::json(v).dump();
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? format_double(v, 17) : "null";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

}  // namespace

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("Table: row width mismatch");
  rows_.push_back(std::move(row));
}

void Table::add_note(std::string key, Cell value) { notes_.emplace_back(std::move(key), std::move(value)); }

void Table::write(std::ostream& os, Format format, int csv_precision) const {
  if (format == Format::Csv) {
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i], csv_precision);
      os << '\n';
    }
    for (const auto& [k, v] : notes_) os << "# " << k << ',' << csv_cell(v, csv_precision) << '\n';
    return;
  }
  for (const auto& row : rows_) {
    os << '{';
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << nlohmann::json(columns_[i]).dump() << ':' << json_cell(row[i]);
    os << "}\n";
  }
  for (const auto& [k, v] : notes_)
    os << "{\"summary\":" << nlohmann::json(k).dump() << ",\"value\":" << json_cell(v) << "}\n";
}

}  // namespace cdpw::cli
