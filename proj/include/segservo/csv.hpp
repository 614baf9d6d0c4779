#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace segservo {

// Comma-separated table with a header row. Lines starting with '#' are
// comments. Fields never contain commas, so no quoting is used.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws ParseError
  bool has_column(const std::string& name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in);

void save_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable load_csv(const std::filesystem::path& path);

// Whitespace-separated copy for gnuplot ('#' header line).
void save_gnuplot(const std::filesystem::path& path, const CsvTable& table);

}  // namespace segservo
