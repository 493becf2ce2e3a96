#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace rlsc {

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

// 17 significant digits, so every double round-trips.
std::string format_double(double v);
std::string format_cell(const Cell& c);

std::string to_csv(const Table& t);
// Raw string cells, header first. Handles the quoting that to_csv produces.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Throws std::runtime_error when the file cannot be written.
void write_file(const std::string& path, const std::string& contents);
void emit_csv(const Table& t, const std::string& path);

} // namespace rlsc
