#pragma once

#include "roughlab/path.hpp"

namespace roughlab {

/// homogeneous_norm(g^{-1} h).
double cc_distance(const GroupElement& g, const GroupElement& h);

/// Grid suprema. The pair loops are OpenMP-parallel over the left index; the
/// serial versions in `reference` compute the same maxima and are kept for tests.
double d_inf(const GridRoughPath& x, const GridRoughPath& y);
double holder_norm(const GridRoughPath& x, double alpha);
double d_holder(const GridRoughPath& x, const GridRoughPath& y, double gamma);

/// Grid p-variation: sup over sub-partitions of the grid of
/// (sum d(x_{t_i}, x_{t_{i+1}})^p)^{1/p}, by dynamic programming.
double p_variation(const GridRoughPath& x, double p);

namespace reference {
double holder_norm(const GridRoughPath& x, double alpha);
double d_holder(const GridRoughPath& x, const GridRoughPath& y, double gamma);
}  // namespace reference

}  // namespace roughlab
