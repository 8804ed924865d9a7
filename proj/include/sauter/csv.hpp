#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <unistd.h>
#include <vector>

namespace sauter {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partially written file.
inline void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

/// Renders numeric columns as comma-separated text with one header line.
inline std::string render_csv(const std::vector<std::string> &header, const std::vector<std::vector<double>> &columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("header/column count mismatch");
    std::ostringstream out;
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto &col : columns)
        if (col.size() != rows) throw std::invalid_argument("ragged CSV columns");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_number(columns[c][r]);
        out << '\n';
    }
    return out.str();
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("CSV has no column '" + std::string(name) + "'");
    }
};

inline CsvTable read_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + " is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size())
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
            row.push_back(v);
        }
        if (row.size() != table.header.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": wrong column count");
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace sauter
