#include "cli/table.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "homodyne/error.hpp"
#include "homodyne/format.hpp"

namespace homodyne::cli {

void Table::add_row(std::vector<Cell> row) {
  require(row.size() == columns.size(), ErrorKind::Parameter, "table row width does not match header");
  rows.push_back(std::move(row));
}

namespace {

std::string csv_field(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* s = std::get_if<std::string>(&cell)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string quoted = "\"";
    for (char c : *s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  return {};
}

nlohmann::json json_value(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isfinite(*d)) return *d;
    return format_double(*d);
  }
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  return nullptr;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  doc["meta"] = table.comments;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_value(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
  if (format == OutputFormat::Json) {
    write_json(out, table);
  } else {
    write_csv(out, table);
  }
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) fail(ErrorKind::Io, "cannot open output file '" + cfg.out + "'");
  file << text;
  if (!file) fail(ErrorKind::Io, "failed writing '" + cfg.out + "'");
}

}  // namespace homodyne::cli
