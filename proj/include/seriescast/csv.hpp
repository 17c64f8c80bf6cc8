#pragma once

#include "seriescast/date.hpp"
#include "seriescast/error.hpp"
#include "seriescast/time_series.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace seriescast {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t begin = 0;
        while (begin < cell.size() && cell[begin] == ' ') ++begin;
        cells.push_back(cell.substr(begin));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

inline double parse_number(const std::string& text, std::size_t row) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError("non-numeric value '" + text + "' at data row " + std::to_string(row));
    }
    return value;
}

} // namespace detail

/**
 * Loads consecutive daily series from a headered CSV. Dates must be
 * ISO-8601 and strictly consecutive; every requested column must be
 * present and numeric in every row.
 */
inline std::map<std::string, TimeSeries> load_csv(const std::string& path,
                                                  const std::string& date_column,
                                                  const std::vector<std::string>& value_columns) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(file, line)) throw SchemaError("'" + path + "' is empty");
    const auto header = detail::split_csv_line(line);

    const auto column_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw SchemaError("column '" + name + "' not found in '" + path + "'");
    };

    const std::size_t date_index = column_index(date_column);
    std::vector<std::size_t> value_indices;
    for (const auto& name : value_columns) value_indices.push_back(column_index(name));

    std::vector<Date> dates;
    std::vector<std::vector<double>> columns(value_columns.size());
    std::size_t row = 0;
    while (std::getline(file, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() <= date_index) {
            throw ParseError("short row " + std::to_string(row) + " in '" + path + "'");
        }
        const Date date = Date::parse(cells[date_index]);
        if (!dates.empty()) {
            const long gap = date - dates.back();
            if (gap == 0) throw ContinuityError("duplicate date " + date.to_string());
            if (gap != 1) {
                throw ContinuityError("gap before " + date.to_string() + " (previous " +
                                      dates.back().to_string() + ")");
            }
        }
        dates.push_back(date);
        for (std::size_t c = 0; c < value_indices.size(); ++c) {
            if (cells.size() <= value_indices[c]) {
                throw ParseError("short row " + std::to_string(row) + " in '" + path + "'");
            }
            columns[c].push_back(detail::parse_number(cells[value_indices[c]], row));
        }
    }
    if (dates.empty()) throw SchemaError("'" + path + "' has a header but no data rows");

    std::map<std::string, TimeSeries> out;
    for (std::size_t c = 0; c < value_columns.size(); ++c) {
        out.emplace(value_columns[c], TimeSeries(dates.front(), std::move(columns[c])));
    }
    return out;
}

} // namespace seriescast
