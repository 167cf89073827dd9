#pragma once

#include "meanfield/radial.hpp"

#include <iosfwd>
#include <string>

namespace meanfield {

/// 17 significant digits; round-trips every finite double.
std::string format_real(double v);

/// CSV with header `r,value`, one row per node.
void write_field_csv(std::ostream& os, const RadialField& u);
/// Reads the format above; the grid is rebuilt from the r column.
RadialField read_field_csv(std::istream& is);

RadialField read_field_csv_file(const std::string& path);
void write_field_csv_file(const std::string& path, const RadialField& u);

} // namespace meanfield
