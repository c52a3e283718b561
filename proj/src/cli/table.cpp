#include "qbsim/cli/table.hpp"

#include "qbsim/errors.hpp"

#include <cstdio>
#include <ostream>

namespace qbsim::cli {

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw DimensionMismatch("Table::add_row", row.size(), columns.size());
    rows.push_back(std::move(row));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << csv_field(table.columns[c]);
    out << "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << "\r\n";
    }
}

nlohmann::ordered_json table_to_json(const Table& table) {
    auto records = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r;
        for (std::size_t c = 0; c < row.size(); ++c) r[table.columns[c]] = row[c];
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace qbsim::cli
