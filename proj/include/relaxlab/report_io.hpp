#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace relaxlab {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Rows of named columns, written as CSV or JSON in row order.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json meta = nlohmann::json::object();

    void add_row(std::vector<Cell> row);
};

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);

/// 12 significant digits; nan and inf spelled out.
std::string format_number(double v);

void write_csv(std::ostream& os, const Table& t);
nlohmann::json table_to_json(const Table& t);
void write_table(std::ostream& os, const Table& t, OutputFormat fmt);

}  // namespace relaxlab
