#include "pfl/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>

#include "pfl/errors.hpp"

namespace pfl::csv {
namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<Row> read_rows(std::istream& is)
{
    std::vector<Row> rows;
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        Row row;
        row.line = number;
        std::size_t start = 0;
        while (true) {
            const auto comma = t.find(',', start);
            row.fields.push_back(trim(t.substr(start, comma - start)));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Table read(std::istream& is)
{
    auto rows = read_rows(is);
    if (rows.empty()) {
        throw SchemaError("CSV input is empty");
    }
    Table table;
    table.header = std::move(rows.front());
    table.rows.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw SchemaError("line " + std::to_string(row.line) + ": expected " +
                                  std::to_string(table.header.size()) + " fields, found " +
                                  std::to_string(row.size()),
                              {}, row.line);
        }
    }
    return table;
}

void require_header(const Row& header, std::initializer_list<const char*> expected)
{
    std::size_t i = 0;
    for (const char* name : expected) {
        if (i >= header.size()) {
            throw SchemaError(std::string("missing column '") + name + "'", name, header.line);
        }
        if (header[i] != name) {
            throw SchemaError("unexpected column '" + header[i] + "' (expected '" + name + "')", header[i],
                              header.line);
        }
        ++i;
    }
    if (header.size() > expected.size()) {
        throw SchemaError("unexpected extra column '" + header[expected.size()] + "'", header[expected.size()],
                          header.line);
    }
}

void require_header(const Table& table, std::initializer_list<const char*> expected)
{
    require_header(table.header, expected);
}

double to_double(const std::string& field, const std::string& column, int line)
{
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw SchemaError("line " + std::to_string(line) + ": column '" + column + "' is not a number: '" +
                              field + "'",
                          column, line);
    }
    return value;
}

std::string format(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace pfl::csv
