// table.hpp: CSV and JSON emission of numeric tables with a trailing flags column

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cspin/sweep.hpp"

namespace cspin {

struct TableRow {
    std::vector<double> values;
    std::string flags;
};

struct Table {
    std::map<std::string, std::string> metadata;
    std::vector<std::string> columns; // numeric columns; "flags" is appended on output
    std::vector<TableRow> rows;
};

// <axis>, time, observable columns
Table to_table(const SweepResult& sweep);

// 17 significant digits ("%.17g"); non-finite values print as inf, -inf, nan.
std::string format_double(double x);

// Header line of column names, then one line per row. Metadata is not written.
void write_csv(std::ostream& out, const Table& table);

// {"metadata": {...}, "columns": [...], "rows": [[...], ...]}; non-finite numbers are
// emitted as the strings "inf", "-inf", "nan".
void write_json(std::ostream& out, const Table& table);

} // namespace cspin
