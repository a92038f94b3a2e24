#include "chemcompass/result_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chemcompass {

std::string format_value(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::logic_error("result row has " + std::to_string(row.size()) +
                           " values, table has " + std::to_string(columns.size()) +
                           " columns");
  rows.push_back(std::move(row));
}

void ResultTable::add_meta(const std::string& key, const std::string& value) {
  metadata.emplace_back(key, value);
}

std::string ResultTable::to_csv(int precision) const {
  std::ostringstream out;
  for (const auto& [key, value] : metadata) {
    // Multi-line values (the config echo) become one comment line each.
    std::stringstream vs(value);
    std::string part;
    bool first = true;
    while (std::getline(vs, part)) {
      out << "# " << key << (first ? " = " : " | ") << part << "\n";
      first = false;
    }
    if (first) out << "# " << key << " =\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ",";
    out << columns[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << format_value(row[i], precision);
    }
    out << "\n";
  }
  return out.str();
}

void ResultTable::write_csv(const std::string& path, int precision) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << to_csv(precision);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace chemcompass
