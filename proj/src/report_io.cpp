#include "tailbound/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace tailbound {

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

Table to_table(const VerificationReport& rep) {
    Table t;
    t.headers = {"x", "tail", "margin"};
    for (const BoundKind k : rep.kinds) t.headers.push_back(bound_name(k));
    t.headers.push_back("violation");
    t.rows.reserve(rep.rows.size());
    for (const auto& row : rep.rows) {
        std::vector<std::string> r;
        r.push_back(format_double(row.x));
        r.push_back(format_double(row.tail));
        r.push_back(format_double(row.margin));
        for (const double b : row.bounds) r.push_back(format_double(b));
        r.push_back(row.violation ? "1" : "0");
        t.rows.push_back(std::move(r));
    }
    return t;
}

std::string table_to_csv(const Table& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.headers.size(); ++i) {
        if (i) out << ',';
        out << t.headers[i];
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string table_to_json(const Table& t) {
    // Cell values are already decimal numbers; emit them as raw JSON tokens
    // so the rendering matches the CSV byte for byte.
    std::ostringstream out;
    out << "[\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << "  {";
        for (std::size_t i = 0; i < t.headers.size(); ++i) {
            if (i) out << ", ";
            out << '"' << t.headers[i] << "\": " << t.rows[r][i];
        }
        out << (r + 1 < t.rows.size() ? "},\n" : "}\n");
    }
    out << "]\n";
    return out.str();
}

Table table_from_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (first) {
            t.headers = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.headers.size()) {
                throw std::runtime_error("csv: ragged row");
            }
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

}  // namespace tailbound
