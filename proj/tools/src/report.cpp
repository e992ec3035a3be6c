#include "scenrisk/cli/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace scenrisk::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    // fmt is locale independent, so the decimal point is always a dot
    auto s = fmt::format("{:.12f}", v);
    if (s == "-0.000000000000") s.erase(0, 1);
    return s;
}

Cell Cell::number(double v) {
    Cell c{format_number(v), {}};
    // JSON has no infinities; keep their text form
    if (std::isfinite(v)) {
        c.value = v == 0.0 ? 0.0 : v;
    } else {
        c.value = c.text;
    }
    return c;
}

Cell Cell::integer(std::int64_t v) { return {std::to_string(v), v}; }
Cell Cell::string(std::string s) { return {s, s}; }
Cell Cell::boolean(bool b) { return {b ? "true" : "false", b}; }

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void render_aligned(std::string& out, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    auto widen = [&](const std::vector<std::string>& cells) {
        if (width.size() < cells.size()) width.resize(cells.size(), 0);
        for (std::size_t c = 0; c < cells.size(); ++c) width[c] = std::max(width[c], cells[c].size());
    };
    widen(header);
    for (const auto& r : rows) widen(r);
    auto line = [&](const std::vector<std::string>& cells) {
        std::string l;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            l += cells[c];
            if (c + 1 < cells.size()) l += std::string(width[c] - cells[c].size() + 2, ' ');
        }
        out += l + "\n";
    };
    if (!header.empty()) line(header);
    for (const auto& r : rows) line(r);
}

std::vector<std::vector<std::string>> texts(const Table& t) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : t.rows) {
        std::vector<std::string> cells;
        for (const auto& c : r) cells.push_back(c.text);
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string render_table(const Report& rep) {
    std::string out = "command: " + rep.command + "\n";
    std::vector<std::vector<std::string>> kv;
    for (const auto& [k, c] : rep.fields) kv.push_back({k, c.text});
    render_aligned(out, {}, kv);
    for (const auto& t : rep.tables) {
        out += "\n[" + t.name + "]\n";
        render_aligned(out, t.columns, texts(t));
    }
    return out;
}

std::string render_csv(const Report& rep) {
    std::string out = "key,value\n";
    out += "command," + csv_escape(rep.command) + "\n";
    for (const auto& [k, c] : rep.fields) out += csv_escape(k) + "," + csv_escape(c.text) + "\n";
    for (const auto& t : rep.tables) {
        out += "\n";
        std::vector<std::string> cells;
        for (const auto& col : t.columns) cells.push_back(csv_escape(col));
        out += fmt::format("{}\n", fmt::join(cells, ","));
        for (const auto& r : t.rows) {
            cells.clear();
            for (const auto& c : r) cells.push_back(csv_escape(c.text));
            out += fmt::format("{}\n", fmt::join(cells, ","));
        }
    }
    return out;
}

std::string render_structured(const Report& rep) {
    nlohmann::ordered_json j;
    j["command"] = rep.command;
    auto& fields = j["fields"] = nlohmann::ordered_json::object();
    for (const auto& [k, c] : rep.fields) fields[k] = c.value;
    auto& tables = j["tables"] = nlohmann::ordered_json::object();
    for (const auto& t : rep.tables) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& r : t.rows) {
            nlohmann::ordered_json row;
            for (std::size_t c = 0; c < t.columns.size(); ++c) row[t.columns[c]] = r[c].value;
            rows.push_back(std::move(row));
        }
        tables[t.name] = std::move(rows);
    }
    return j.dump(2) + "\n";
}

} // namespace

std::string render(const Report& report, Format format) {
    switch (format) {
    case Format::Table: return render_table(report);
    case Format::Csv: return render_csv(report);
    case Format::Structured: return render_structured(report);
    }
    return {};
}

} // namespace scenrisk::cli
