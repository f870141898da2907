#include "translume/cli.hpp"
#include "translume/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace translume::cli {

const char* version() { return TRANSLUME_VERSION; }

namespace {

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no NaN/Inf; those travel as strings.
        if (std::isfinite(*d)) return *d;
        return format_double(*d);
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

}  // namespace

std::string render_table(const Table& table, Format format) {
    const std::string tool = std::string("translume ") + version();
    if (format == Format::Csv) {
        std::string out = "# " + tool + "\n";
        for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
        out += "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
            out += "\n";
        }
        return out;
    }
    nlohmann::ordered_json j;
    j["tool"] = tool;
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

std::filesystem::path write_table(const Table& table, const std::filesystem::path& stem, Format format) {
    std::filesystem::path path = stem;
    path += format == Format::Csv ? ".csv" : ".json";
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << render_table(table, format);
    if (!out) throw Error("write failed for " + path.string());
    return path;
}

}  // namespace translume::cli
