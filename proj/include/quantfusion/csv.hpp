#pragma once

#include <string>
#include <vector>

namespace qf {

// Minimal CSV support. All of our file formats are plain comma-separated
// values with a header row and no quoting, so this deliberately does not
// implement the full RFC 4180 grammar. Empty fields are preserved as empty
// strings (the factor loader treats those as nulls).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name, or -1 when absent.
    [[nodiscard]] int column(const std::string& name) const;
};

std::vector<std::string> split_csv_line(const std::string& line);

// Shortest decimal form that round-trips the exact double, via to_chars.
// Used for every numeric field we serialize so reloading a file reproduces
// the in-memory values bit for bit.
std::string format_number(double value);

// Strict double parse; the whole field must be consumed.
double parse_number(const std::string& field, const std::string& what);

// Reads the whole file. Throws IoError when the file cannot be opened and
// ParseError when a row's field count disagrees with the header.
CsvTable read_csv(const std::string& path);

// Writes header + rows. Throws IoError on open failure.
void write_csv(const std::string& path, const CsvTable& table);

} // namespace qf
