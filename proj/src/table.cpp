#include "collab/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "collab/error.hpp"

namespace collab {

Table& Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw Error("table " + name + ": row has " + std::to_string(row.size()) +
                " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
  return *this;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  if (v == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return quote(s); }
  };
  return std::visit(Visitor{}, c.value());
}

void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out << ',';
    out << t.columns[i];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_cell(row[i]);
    }
    out << '\n';
  }
}

void write_csv(const Table& t, const std::filesystem::path& dir) {
  std::ofstream out(dir / (t.name + ".csv"), std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / (t.name + ".csv")).string());
  write_csv(t, out);
}

Table& StatReport::add(Table t) {
  tables.push_back(std::move(t));
  return tables.back();
}

const Table* StatReport::find(std::string_view name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

void StatReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const auto& t : tables) write_csv(t, dir);
}

}  // namespace collab
