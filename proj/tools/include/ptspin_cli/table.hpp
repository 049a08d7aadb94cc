// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "ptspin_cli/config.hpp"

namespace ptspin::cli {

/// Fixed 12-significant-digit rendering used for every floating column.
std::string format_number(double v);
std::string format_number(int v);
std::string format_number(std::int64_t v);

/// Tab-separated output: a '#' comment block with the version, command and every resolved
/// configuration key, then one header line, then data rows.
class TableWriter {
 public:
  TableWriter(const std::string& path, const std::string& command, const RunConfig& config,
              std::vector<std::string> columns);

  void row(const std::vector<std::string>& cells);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t width_;
  std::ofstream out_;
};

struct Table {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

/// Parses a file written by TableWriter. Throws std::runtime_error on malformed input.
Table read_table(const std::string& path);

}  // namespace ptspin::cli
