#include "segservo/csv.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "segservo/error.hpp"
#include "segservo/numeric_text.hpp"

namespace segservo {

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorKind::ParseError, "csv has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

namespace {

void write_row(std::ostream& out, const std::vector<std::string>& fields, char separator) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << separator;
    out << fields[i];
  }
  out << '\n';
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table) {
  for (const auto& comment : table.comments) out << '#' << comment << '\n';
  write_row(out, table.header, ',');
  for (const auto& row : table.rows) write_row(out, row, ',');
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with('#')) {
      table.comments.push_back(line.substr(1));
      continue;
    }
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    for (auto& field : fields) field = std::string(trim(field));
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorKind::ParseError, "csv row has " + std::to_string(fields.size()) + " fields, header has " +
                                             std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw Error(ErrorKind::ParseError, "csv has no header row");
  return table;
}

void save_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  write_csv(out, table);
}

CsvTable load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + path.string());
  return read_csv(in);
}

void save_gnuplot(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  out << "# ";
  write_row(out, table.header, ' ');
  for (const auto& row : table.rows) {
    std::vector<std::string> fields = row;
    for (auto& field : fields) {
      if (field.empty()) field = "?";
    }
    write_row(out, fields, ' ');
  }
}

}  // namespace segservo
