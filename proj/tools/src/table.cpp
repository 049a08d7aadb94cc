// Copyright The ptspin Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ptspin_cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ptspin_cli/version.hpp"

namespace ptspin::cli {

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

std::string format_number(int v) { return std::to_string(v); }
std::string format_number(std::int64_t v) { return std::to_string(v); }

TableWriter::TableWriter(const std::string& path, const std::string& command,
                         const RunConfig& config, std::vector<std::string> columns)
    : path_(path), width_(columns.size()), out_(path) {
  if (!out_) {
    throw std::runtime_error("cannot write " + path);
  }
  out_ << "# ptspin " << kVersion << '\n';
  out_ << "# command: " << command << '\n';
  for (const auto& [key, value] : config.resolved) {
    out_ << "# " << key << " = " << value << '\n';
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out_ << (i ? "\t" : "") << columns[i];
  }
  out_ << '\n';
}

void TableWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) {
    throw std::logic_error("row width does not match the header of " + path_);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out_ << (i ? "\t" : "") << cells[i];
  }
  out_ << '\n';
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) {
      return i;
    }
  }
  throw std::out_of_range("no column " + name);
}

double Table::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  std::size_t used = 0;
  const double v = std::stod(cell, &used);
  if (used != cell.size()) {
    throw std::runtime_error("not a number: " + cell);
  }
  return v;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, '\t')) {
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == '\t') {
    out.emplace_back();
  }
  return out;
}

}  // namespace

Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  Table t;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!header && line.rfind("#", 0) == 0) {
      t.comments.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    auto cells = split_tabs(line);
    if (!header) {
      t.columns = std::move(cells);
      header = true;
      continue;
    }
    if (cells.size() != t.columns.size()) {
      throw std::runtime_error(path + ": row has " + std::to_string(cells.size()) +
                               " cells, header has " + std::to_string(t.columns.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (!header) {
    throw std::runtime_error(path + ": missing header line");
  }
  return t;
}

}  // namespace ptspin::cli
