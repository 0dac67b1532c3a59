#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace gsm {

using Json = nlohmann::ordered_json;

// null prints as an empty CSV field.
using Cell = std::variant<std::monostate, bool, std::uint64_t, double, std::string>;

enum class ReportFormat { csv, json };

std::string to_string(ReportFormat f);
ReportFormat parse_format(const std::string& s);

struct ReportTable {
    std::string schema;
    int schema_version = 1;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    Json summary = Json::object();

    bool operator==(const ReportTable&) const = default;
};

// Shortest decimal that round-trips.
std::string format_double(double v);

std::string render_csv(const ReportTable& table);
std::string render_json(const ReportTable& table);
// Inverse of render_json. Throws std::invalid_argument on malformed input.
ReportTable parse_json_report(const std::string& text);

// Writes the table in the requested format. Throws std::runtime_error on I/O failure.
void emit_report(const ReportTable& table, const std::filesystem::path& path, ReportFormat format);

}  // namespace gsm
