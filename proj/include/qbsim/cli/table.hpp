// table.hpp: numeric tables and their CSV / JSON serialisation

#pragma once

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qbsim::cli {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

// 17 significant digits, scientific notation.
std::string format_double(double v);

// RFC 4180 field quoting.
std::string csv_field(const std::string& text);

void write_csv(std::ostream& out, const Table& table);

// Array of records, one object per row.
nlohmann::ordered_json table_to_json(const Table& table);

} // namespace qbsim::cli
