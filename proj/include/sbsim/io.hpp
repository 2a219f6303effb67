// io.hpp: Column tables and their CSV / JSON serialization

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sbsim/json_fwd.hpp"

namespace sbsim::io {

enum class Format { Csv, Json };

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // one vector per column, all the same length
    json meta = json::object();

    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
};

// 12 significant digits in scientific notation.
std::string format_number(double value);

std::string to_csv(const Table& table);
json to_json(const Table& table);
Table table_from_json(const json& doc);

// Writes through a temporary file in the same directory and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::filesystem::path sidecar_path(const std::filesystem::path& path);

// CSV gets a metadata sidecar next to it; JSON carries the metadata inline and
// also gets the sidecar so both formats look alike to downstream tooling.
void emit(const Table& table, Format format, const std::filesystem::path& path);

} // namespace sbsim::io
