#pragma once

#include <iosfwd>
#include <string>

#include "pplab/field.hpp"

namespace pplab {

/// Field dump format: two header lines, then row-major node values.
///
///   nx,ny,spacing,origin_x,origin_y
///   <domain_kind>,<param>          (annulus param is "inner:outer")
///   v(0,0),v(1,0),...,v(nx-1,0)
///   ...                            (ny rows, y increasing)
///
/// Numbers use 17 significant digits, so finite values round-trip bit-exactly.
/// Exterior nodes are written as nan.
void write_field_csv(const ScalarField& field, std::ostream& os);
void write_field_csv(const ScalarField& field, const std::string& path);

/// Reconstructs the grid from the header (the mask is recomputed from the
/// domain rule) and loads the values.  Malformed input raises
/// std::runtime_error naming the offending row and column.
ScalarField read_field_csv(std::istream& is);
ScalarField read_field_csv(const std::string& path);

/// 17-significant-digit decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace pplab
