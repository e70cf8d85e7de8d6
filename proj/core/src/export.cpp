#include "chiralpoint/export.hpp"

#include "chiralpoint/errors.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#ifndef CHIRALPOINT_VERSION
#define CHIRALPOINT_VERSION "0.0.0"
#endif

namespace chiralpoint
{

void Table::add_row(std::vector<double> values, std::string label, std::string row_status)
{
    if (values.size() != columns.size()) {
        fail(ErrorCode::ValidationError, "row width does not match the table columns");
    }
    rows.push_back(std::move(values));
    if (!label_column.empty()) {
        labels.push_back(std::move(label));
    }
    status.push_back(std::move(row_status));
}

std::size_t Table::column_index(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) {
            return i;
        }
    }
    fail(ErrorCode::SchemaError, "no column named '" + std::string(name) + "'");
}

Format parse_format(std::string_view s)
{
    if (s == "csv") {
        return Format::Csv;
    }
    if (s == "json") {
        return Format::Json;
    }
    fail(ErrorCode::ValidationError, "unknown format '" + std::string(s) + "' (csv|json)");
}

const char* version()
{
    return CHIRALPOINT_VERSION;
}

std::uint64_t fnv1a(std::string_view data)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::scientific << std::setprecision(14) << v;
    return os.str();
}

namespace
{

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

nlohmann::ordered_json number_json(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return nullptr;
}

std::string render_csv(const Table& t, const Provenance& p)
{
    std::ostringstream os;
    os << "# tool: chiralpoint " << version() << '\n';
    if (!p.command.empty()) {
        os << "# command: " << p.command << '\n';
    }
    if (!p.config_hash.empty()) {
        os << "# config_hash: " << p.config_hash << '\n';
    }
    for (const auto& [k, v] : p.notes) {
        os << "# " << k << ": " << v << '\n';
    }
    if (p.timestamp) {
        os << "# generated: " << utc_now() << '\n';
    }
    if (!t.summary.empty()) {
        os << "# summary_columns: ";
        for (std::size_t i = 0; i < t.summary.size(); ++i) {
            os << (i ? "," : "") << t.summary[i].first;
        }
        os << "\n# summary: ";
        for (std::size_t i = 0; i < t.summary.size(); ++i) {
            os << (i ? "," : "") << t.summary[i].second;
        }
        os << '\n';
    }

    const bool labels = !t.label_column.empty();
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    if (labels) {
        os << ',' << t.label_column;
    }
    if (t.has_status) {
        os << ",status";
    }
    os << '\n';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
            os << (i ? "," : "") << format_number(t.rows[r][i]);
        }
        if (labels) {
            os << ',' << t.labels[r];
        }
        if (t.has_status) {
            os << ',' << t.status[r];
        }
        os << '\n';
    }
    return os.str();
}

std::string render_json(const Table& t, const Provenance& p)
{
    nlohmann::ordered_json j;
    j["tool"] = "chiralpoint";
    j["version"] = version();
    if (!p.command.empty()) {
        j["command"] = p.command;
    }
    if (!p.config_hash.empty()) {
        j["config_hash"] = p.config_hash;
    }
    if (p.timestamp) {
        j["generated"] = utc_now();
    }
    if (p.elapsed_seconds >= 0.0) {
        j["timing_s"] = p.elapsed_seconds;
    }
    if (!p.config_json.empty()) {
        j["config"] = nlohmann::ordered_json::parse(p.config_json);
    }
    for (const auto& [k, v] : p.notes) {
        j["notes"][k] = v;
    }
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (double v : t.rows[r]) {
            row.push_back(number_json(v));
        }
        rows.push_back(row);
    }
    j["rows"] = rows;
    if (!t.label_column.empty()) {
        j["label_column"] = t.label_column;
        j["labels"] = t.labels;
    }
    if (t.has_status) {
        j["status"] = t.status;
    }
    for (const auto& [k, v] : t.summary) {
        j["summary"][k] = v;
    }
    return j.dump(2) + "\n";
}

} // namespace

std::string render(const Table& t, Format f, const Provenance& p)
{
    return f == Format::Csv ? render_csv(t, p) : render_json(t, p);
}

void export_table(const Table& t, Format f, const std::string& path, const Provenance& p)
{
    const std::string text = render(t, f, p);
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        fail(ErrorCode::IoError, "write to '" + path + "' failed");
    }
}

} // namespace chiralpoint
