#pragma once

#include <concepts>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace collab {

using CellValue = std::variant<std::monostate, std::int64_t, double, std::string>;

/// A table cell; monostate is written as an empty field (null).
struct Cell : CellValue {
  Cell() = default;
  template <std::integral T>
  Cell(T v) : CellValue(static_cast<std::int64_t>(v)) {}
  template <std::floating_point T>
  Cell(T v) : CellValue(static_cast<double>(v)) {}
  Cell(std::string v) : CellValue(std::move(v)) {}
  Cell(const char* v) : CellValue(std::string(v)) {}
  template <typename T>
  Cell(const std::optional<T>& v) : CellValue(v ? CellValue(Cell(*v)) : CellValue()) {}

  const CellValue& value() const { return *this; }
};

template <typename T>
Cell cell(const T& v) {
  return Cell(v);
}

/// A named result table, written as `<name>.csv`.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table& add(std::vector<Cell> row);
};

/// Shortest round-trip decimal for finite values; empty for NaN/inf.
std::string format_double(double v);
std::string format_cell(const Cell& c);

void write_csv(const Table& t, std::ostream& out);
void write_csv(const Table& t, const std::filesystem::path& dir);

/// A set of tables keyed by name, e.g. fig2a.
struct StatReport {
  std::vector<Table> tables;

  Table& add(Table t);
  const Table* find(std::string_view name) const;
  void write(const std::filesystem::path& dir) const;
};

}  // namespace collab
