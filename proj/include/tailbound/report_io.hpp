#pragma once

#include <string>
#include <vector>

#include "tailbound/oracle.hpp"

namespace tailbound {

/// Shortest-of-17-significant-digits decimal rendering; round trips doubles.
std::string format_double(double v);

/// A plain value table with fixed lowercase headers, the shared shape of
/// eval tables and verification reports.
struct Table {
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;
};

Table to_table(const VerificationReport& rep);

std::string table_to_csv(const Table& t);
std::string table_to_json(const Table& t);

/// Parses CSV produced by table_to_csv; re-emitting gives identical bytes.
Table table_from_csv(const std::string& text);

}  // namespace tailbound
