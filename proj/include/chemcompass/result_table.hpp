#pragma once

// Rectangular numeric tables with a '#'-prefixed metadata header, written as
// CSV. The header carries the resolved configuration and its hash so any
// output file identifies the run that produced it; the data section is
// deterministic for a given configuration.

#include <string>
#include <utility>
#include <vector>

namespace chemcompass {

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_row(std::vector<double> row);  // throws if the width disagrees
  void add_meta(const std::string& key, const std::string& value);

  // Metadata lines ("# key = value"), then the column header, then one row
  // per line with values at the given significant-digit precision.
  std::string to_csv(int precision = 17) const;
  void write_csv(const std::string& path, int precision = 17) const;
};

std::string format_value(double v, int precision);

}  // namespace chemcompass
