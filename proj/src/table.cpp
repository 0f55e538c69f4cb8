#include "roughlab/table.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace roughlab {

TableFormat parse_table_format(const std::string& s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  throw std::invalid_argument("unknown format '" + s + "' (expected csv or json)");
}

void Table::add_row(std::vector<nlohmann::json> cells) {
  if (cells.size() != columns_.size()) throw std::invalid_argument("table row has the wrong number of cells");
  rows_.push_back(std::move(cells));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw std::out_of_range("no column '" + name + "'");
}

std::vector<double> Table::numbers(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> v;
  for (const auto& r : rows_) v.push_back(r[c].is_number() ? r[c].get<double>() : NAN);
  return v;
}

namespace {

std::string csv_cell(const nlohmann::json& c) {
  if (c.is_string()) {
    std::string s = c.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
  if (c.is_number_integer()) return std::to_string(c.get<long long>());
  if (c.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", c.get<double>());
    return buf;
  }
  if (c.is_null()) return "";
  return c.dump();
}

}  // namespace

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
    out << "\n";
  }
}

void Table::write_json(std::ostream& out) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows_) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      const bool bad = r[i].is_number_float() && !std::isfinite(r[i].get<double>());
      o[columns_[i]] = bad ? nlohmann::json() : r[i];
    }
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << "\n";
}

void Table::write(std::ostream& out, TableFormat f) const {
  if (f == TableFormat::csv)
    write_csv(out);
  else
    write_json(out);
}

}  // namespace roughlab
