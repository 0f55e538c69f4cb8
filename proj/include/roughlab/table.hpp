#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace roughlab {

enum class TableFormat { csv, json };
TableFormat parse_table_format(const std::string& s);

/// Header plus records; cells are numbers, strings or booleans.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<nlohmann::json> cells);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<nlohmann::json>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  std::size_t column(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;

  void write_csv(std::ostream& out) const;
  /// List of objects keyed by column name.
  void write_json(std::ostream& out) const;
  void write(std::ostream& out, TableFormat f) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<nlohmann::json>> rows_;
};

}  // namespace roughlab
