#pragma once

#include <string>
#include <vector>

namespace voltcast {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

// Reads a comma-separated file. No quoting support: none of the project's
// formats embed commas.
CsvTable read_csv(const std::string& path);

// Validates that the header matches exactly the expected column names.
CsvTable read_csv_expect(const std::string& path, const std::vector<std::string>& columns);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

double parse_double(const std::string& text, const std::string& context);
long parse_long(const std::string& text, const std::string& context);

// Shortest exact decimal form (round-trips through strtod).
std::string format_double(double v);

}  // namespace voltcast
