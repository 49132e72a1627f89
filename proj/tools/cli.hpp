#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lsw::cli {

/// Numeric CSV table held column-wise.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Index of `name`, or -1.
  int find(const std::string& name) const;
  /// DataError naming the file when absent.
  const std::vector<double>& column(const std::string& name) const;
  std::filesystem::path source;
};

/// Comma-separated, header row required, '.' decimals. Errors carry the
/// path (IoError) or row/column (DataError).
Table read_csv(const std::filesystem::path& path);

/// Shortest round-trip representation; "nan", "inf", "-inf" for nonfinite.
std::string format_double(double value);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Runs one command; args exclude the program name. Returns the process
/// exit code and reports errors on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsw::cli
