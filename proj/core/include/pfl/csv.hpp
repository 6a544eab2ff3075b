#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

// Minimal comma-separated reader used by the file formats of this library.
// Blank lines and lines starting with '#' are skipped; fields are trimmed.

namespace pfl::csv {

struct Row {
    std::vector<std::string> fields;
    int line = 0;

    const std::string& operator[](std::size_t i) const { return fields[i]; }
    std::size_t size() const noexcept { return fields.size(); }
};

struct Table {
    Row header;
    std::vector<Row> rows;
};

std::vector<Row> read_rows(std::istream& is);

// First row becomes the header; every data row must match its width.
Table read(std::istream& is);

// Throws SchemaError naming the first offending column.
void require_header(const Table& table, std::initializer_list<const char*> expected);
void require_header(const Row& header, std::initializer_list<const char*> expected);

double to_double(const std::string& field, const std::string& column, int line);

// %.17g formatting.
std::string format(double value);

}  // namespace pfl::csv
