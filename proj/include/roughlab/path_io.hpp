#pragma once

#include <iosfwd>
#include <string>

#include "roughlab/path.hpp"

namespace roughlab {

/// Header `t,x1,...,xd`; one row per breakpoint; strictly increasing t.
PiecewisePath read_path_csv(std::istream& in);
PiecewisePath read_path_csv_file(const std::string& filename);
void write_path_csv(std::ostream& out, const PiecewisePath& path);

}  // namespace roughlab
