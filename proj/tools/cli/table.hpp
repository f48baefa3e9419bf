#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "cli/config.hpp"

namespace homodyne::cli {

// Empty cells serialise as an empty CSV field and as JSON null.
using Cell = std::variant<std::monostate, std::string, double>;

struct Table {
  std::vector<std::string> comments;  // metadata, "key=value" by convention
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);
void write_table(std::ostream& out, const Table& table, OutputFormat format);

/// Writes text to cfg.out, or to stdout when no path is configured.
void emit(const RunConfig& cfg, const std::string& text);

}  // namespace homodyne::cli
