#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace wordbias {

// Minimal RFC 4180 support: fields containing a comma, quote or newline are
// quoted, embedded quotes doubled.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> read_csv(std::istream& in);

// Writes to "<path>.tmp" and renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace wordbias
