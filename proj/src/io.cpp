// io.cpp: CSV / JSON emission

#include "sbsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "sbsim/errors.hpp"

namespace sbsim::io {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", value);
    return buf;
}

std::string to_csv(const Table& table) {
    std::ostringstream out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.data.size(); ++c) out << (c ? "," : "") << format_number(table.data[c][r]);
        out << '\n';
    }
    return out.str();
}

json to_json(const Table& table) {
    json doc;
    json cols = json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        json arr = json::array();
        for (double v : table.data[c]) arr.push_back(v);
        cols[table.columns[c]] = std::move(arr);
    }
    doc["columns"] = std::move(cols);
    doc["metadata"] = table.meta;
    return doc;
}

Table table_from_json(const json& doc) {
    Table t;
    for (const auto& [name, values] : doc.at("columns").items()) {
        t.columns.push_back(name);
        t.data.push_back(values.get<std::vector<double>>());
    }
    t.meta = doc.value("metadata", json::object());
    return t;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::random_device rd;
    const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError(ErrorKind::InvalidConfig, "output", "cannot write " + tmp.string());
        f << content;
        if (!f.flush()) {
            std::filesystem::remove(tmp);
            throw ValidationError(ErrorKind::InvalidConfig, "output", "write failed for " + path.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    auto p = path;
    p += ".meta.json";
    return p;
}

void emit(const Table& table, Format format, const std::filesystem::path& path) {
    const std::string body = format == Format::Csv ? to_csv(table) : to_json(table).dump(2) + "\n";
    write_atomic(sidecar_path(path), table.meta.dump(2) + "\n");
    write_atomic(path, body);
}

} // namespace sbsim::io
