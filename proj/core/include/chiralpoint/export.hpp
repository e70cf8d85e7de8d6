#ifndef CHIRALPOINT_EXPORT_HPP
#define CHIRALPOINT_EXPORT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chiralpoint
{

// Numeric table with optional text columns. Rows that failed carry the
// error code in status and NaN values.
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string label_column; // optional text column written after the numeric ones
    std::vector<std::string> labels;
    bool has_status = false;
    std::vector<std::string> status;
    std::vector<std::pair<std::string, std::string>> summary; // one-row summary

    void add_row(std::vector<double> values, std::string label = {}, std::string row_status = "ok");
    std::size_t column_index(std::string_view name) const; // throws SchemaError
};

enum class Format
{
    Csv,
    Json,
};

Format parse_format(std::string_view s);

struct Provenance
{
    std::string command;
    std::string config_hash;
    std::string config_json; // embedded in JSON output
    std::vector<std::pair<std::string, std::string>> notes;
    double elapsed_seconds = -1.0;
    bool timestamp = true;
};

const char* version();

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

// Scientific notation, 15 significant digits; "nan"/"inf" for non-finite.
std::string format_number(double v);

std::string render(const Table& table, Format format, const Provenance& provenance);

// path "-" writes to stdout. IoError when the file cannot be written.
void export_table(const Table& table, Format format, const std::string& path, const Provenance& provenance);

} // namespace chiralpoint

#endif
