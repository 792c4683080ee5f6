#include "cspin/table.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace cspin {

Table to_table(const SweepResult& sweep) {
    Table t;
    t.metadata = sweep.metadata;
    t.columns = {sweep.axis, "time"};
    t.columns.insert(t.columns.end(), sweep.columns.begin(), sweep.columns.end());
    t.rows.reserve(sweep.rows.size());
    for (const auto& r : sweep.rows) {
        TableRow row{{r.axis_value, r.time}, r.flags};
        row.values.insert(row.values.end(), r.values.begin(), r.values.end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& out, const Table& t) {
    for (const auto& c : t.columns) out << c << ',';
    out << "flags\n";
    for (const auto& r : t.rows) {
        for (const double v : r.values) out << format_double(v) << ',';
        out << r.flags << '\n';
    }
}

namespace {

nlohmann::ordered_json number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

} // namespace

void write_json(std::ostream& out, const Table& t) {
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json(t.metadata);
    auto cols = nlohmann::ordered_json::array();
    for (const auto& c : t.columns) cols.push_back(c);
    cols.push_back("flags");
    doc["columns"] = std::move(cols);
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        auto row = nlohmann::ordered_json::array();
        for (const double v : r.values) row.push_back(number(v));
        row.push_back(r.flags);
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(1) << '\n';
}

} // namespace cspin
