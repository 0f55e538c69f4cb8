#include "roughlab/path_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace roughlab {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

double parse_number(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw std::runtime_error("path CSV line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

PiecewisePath read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("path CSV: empty input");
  const auto header = split_row(line);
  if (header.size() < 2 || header[0] != "t")
    throw std::runtime_error("path CSV: header must be t,x1,...,xd");
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] != "x" + std::to_string(i))
      throw std::runtime_error("path CSV: unexpected header column '" + header[i] + "'");
  const int d = static_cast<int>(header.size()) - 1;

  std::vector<double> times;
  std::vector<double> vals;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_row(line);
    if (static_cast<int>(cells.size()) != d + 1)
      throw std::runtime_error("path CSV line " + std::to_string(line_no) + ": expected " +
                               std::to_string(d + 1) + " columns");
    const double t = parse_number(cells[0], line_no);
    if (!times.empty() && !(t > times.back()))
      throw std::runtime_error("path CSV line " + std::to_string(line_no) + ": time not strictly increasing");
    times.push_back(t);
    for (int i = 1; i <= d; ++i) vals.push_back(parse_number(cells[i], line_no));
  }
  if (times.size() < 2) throw std::runtime_error("path CSV: need at least two rows");
  return PiecewisePath(Dissection(std::move(times)), d, std::move(vals));
}

PiecewisePath read_path_csv_file(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("cannot open path CSV '" + filename + "'");
  return read_path_csv(in);
}

void write_path_csv(std::ostream& out, const PiecewisePath& path) {
  out << "t";
  for (int i = 1; i <= path.dim(); ++i) out << ",x" << i;
  out << "\n" << std::setprecision(17);
  for (std::size_t j = 0; j < path.size(); ++j) {
    out << path.breakpoints()[j];
    for (double v : path.point(j)) out << "," << v;
    out << "\n";
  }
}

}  // namespace roughlab
