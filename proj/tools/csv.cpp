#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "lsw/error.hpp"

namespace lsw::cli {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

int Table::find(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

const std::vector<double>& Table::column(const std::string& name) const {
  const int i = find(name);
  if (i < 0) throw DataError(source.string() + ": no column named '" + name + "'");
  return columns[static_cast<std::size_t>(i)];
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file " + path.string());
  Table table;
  table.source = path;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": missing header row");
  for (auto& name : split_line(line)) table.header.push_back(trim(name));
  if (table.header.empty() || table.header.front().empty()) throw DataError(path.string() + ": empty header row");
  table.columns.resize(table.header.size());

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw DataError(path.string() + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " fields, expected " + std::to_string(table.header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw DataError(path.string() + ": row " + std::to_string(row) + ", column '" + table.header[c] +
                        "': cannot parse '" + cell + "' as a number");
      table.columns[c].push_back(v);
    }
  }
  return table;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write output file " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  std::string text;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) text += ',';
    text += header[c];
  }
  text += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) text += ',';
      text += format_double(columns[c][r]);
    }
    text += '\n';
  }
  write_text(path, text);
}

}  // namespace lsw::cli
