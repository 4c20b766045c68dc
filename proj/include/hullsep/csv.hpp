#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hullsep/point_set.hpp"

namespace hullsep {

/// Comma-separated reals, one point per row. An optional first line starting
/// with '#' is a header and is skipped; blank lines are ignored. Parsing is
/// locale independent ('.' decimal point).
PointSet read_csv(std::istream& in);
PointSet load_csv(const std::filesystem::path& path);

/// Writes a '#' header followed by one row per point. Values use the shortest
/// representation that parses back to the same double.
void write_csv(std::ostream& out, const PointSet& set);
void save_csv(const PointSet& set, const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace hullsep
