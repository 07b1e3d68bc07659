#include "runckel/io.hpp"

#include <cstdlib>
#include <stdexcept>

namespace runckel::io {

namespace {

void flatten(const Json& value, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (value.is_object()) {
    for (const auto& [key, child] : value.items()) flatten(child, prefix + "." + key, out);
    return;
  }
  out.emplace_back(prefix, value.is_string() ? value.get<std::string>() : value.dump());
}

void write_metadata(std::ostream& os, const Json& block, const std::string& name) {
  std::vector<std::pair<std::string, std::string>> lines;
  flatten(block, name, lines);
  for (const auto& [key, value] : lines) os << "# " << key << '=' << value << '\n';
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(cells[i]);
  }
  os << '\n';
}

Json cell_json(const std::string& cell) {
  if (cell.empty() || cell == "inf" || cell == "-inf" || cell == "nan") return cell;
  char* end = nullptr;
  const double d = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return cell;
  if (format_real(d) != cell) return cell;
  return d;
}

}  // namespace

Format format_from_string(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& os, const Document& doc) {
  write_metadata(os, doc.config, "config");
  write_metadata(os, doc.report, "report");
  write_row(os, doc.records.columns);
  for (const auto& row : doc.records.rows) write_row(os, row);
}

void write_json(std::ostream& os, const Document& doc) {
  Json records = Json::array();
  for (const auto& row : doc.records.rows) {
    Json record = Json::object();
    for (std::size_t i = 0; i < row.size() && i < doc.records.columns.size(); ++i)
      record[doc.records.columns[i]] = cell_json(row[i]);
    records.push_back(std::move(record));
  }
  Json out = Json::object();
  out["config"] = doc.config;
  out["records"] = std::move(records);
  out["report"] = doc.report;
  os << out.dump(2) << '\n';
}

void write(std::ostream& os, const Document& doc, Format format) {
  if (format == Format::Csv)
    write_csv(os, doc);
  else
    write_json(os, doc);
}

}  // namespace runckel::io
