#include "hullsep/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace hullsep {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(std::string_view cell, std::size_t row) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size()) {
    throw Error("row " + std::to_string(row) + ": invalid number '" + std::string(cell) + "'");
  }
  return value;
}

}  // namespace

PointSet read_csv(std::istream& in) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (row == 1 && text.front() == '#') continue;

    std::size_t columns = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      const std::string_view cell = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
      coords.push_back(parse_cell(cell, row));
      ++columns;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim == 0) {
      dim = columns;
    } else if (columns != dim) {
      throw Error("row " + std::to_string(row) + ": expected " + std::to_string(dim) + " columns, got " +
                  std::to_string(columns));
    }
  }
  if (coords.empty()) throw Error("no points");
  return PointSet(dim, std::move(coords));
}

PointSet load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_csv(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

void write_csv(std::ostream& out, const PointSet& set) {
  out << "# ";
  for (std::size_t k = 0; k < set.dim(); ++k) out << (k ? ",x" : "x") << k;
  out << '\n';
  for (std::size_t i = 0; i < set.size(); ++i) {
    const PointView p = set[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ',';
      out << format_double(p[k]);
    }
    out << '\n';
  }
}

void save_csv(const PointSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_csv(out, set);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace hullsep
