#pragma once

// Text serialization of grid fields: `<stem>.csv` with header
// i,j,k,y1,y2,y3,v1,v2,v3 (17 significant digits) and `<stem>.json` with the
// grid metadata. Reading back reproduces every value bit for bit.

#include "mhd_inhibit/model.hpp"

#include <string>
#include <utility>

namespace mhdi {

/// Formats with %.17g.
std::string format_double(double x);

void write_field(const std::string& stem, const VectorField3& field, const Grid3D& grid);
std::pair<VectorField3, Grid3D> read_field(const std::string& stem);

}  // namespace mhdi
