#pragma once

#include "json.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace scenrisk::cli {

enum class Format { Table, Csv, Structured };

/// One report value: its fixed text rendering plus the structured form.
struct Cell {
    std::string text;
    nlohmann::ordered_json value;

    static Cell number(double v);
    static Cell integer(std::int64_t v);
    static Cell string(std::string s);
    static Cell boolean(bool b);
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, Cell>> fields;
    std::vector<Table> tables;

    void add(std::string key, Cell c) { fields.emplace_back(std::move(key), std::move(c)); }
};

/// Fixed 12-decimal rendering; infinities as "inf" / "-inf".
std::string format_number(double v);

std::string render(const Report& report, Format format);

} // namespace scenrisk::cli
