#include "gsm/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gsm/errors.hpp"

namespace gsm {

std::string to_string(ReportFormat f) { return f == ReportFormat::csv ? "csv" : "json"; }

ReportFormat parse_format(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw DomainError("unknown report format '" + s + "' (expected csv|json)");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw InvariantViolation("double formatting failed");
    return std::string(buf, end);
}

namespace {

std::string csv_field(const Cell& cell) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(bool b) const { return b ? "1" : "0"; }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string quoted = "\"";
            for (char c : s) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            return quoted + '"';
        }
    };
    return std::visit(Visitor{}, cell);
}

Json cell_to_json(const Cell& cell) {
    struct Visitor {
        Json operator()(std::monostate) const { return nullptr; }
        Json operator()(bool b) const { return b; }
        Json operator()(std::uint64_t v) const { return v; }
        Json operator()(double v) const { return v; }
        Json operator()(const std::string& s) const { return s; }
    };
    return std::visit(Visitor{}, cell);
}

Cell cell_from_json(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null:
            return std::monostate{};
        case Json::value_t::boolean:
            return j.get<bool>();
        case Json::value_t::number_unsigned:
            return j.get<std::uint64_t>();
        case Json::value_t::number_float:
            return j.get<double>();
        case Json::value_t::string:
            return j.get<std::string>();
        default:
            throw std::invalid_argument("unsupported report cell type");
    }
}

}  // namespace

std::string render_csv(const ReportTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const ReportTable& table) {
    Json j;
    j["schema"] = table.schema;
    j["schema_version"] = table.schema_version;
    j["columns"] = table.columns;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json r = Json::array();
        for (const auto& c : row) r.push_back(cell_to_json(c));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["summary"] = table.summary;
    return j.dump(2) + "\n";
}

ReportTable parse_json_report(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("report is not valid JSON: ") + e.what());
    }
    try {
        ReportTable t;
        t.schema = j.at("schema").get<std::string>();
        t.schema_version = j.at("schema_version").get<int>();
        t.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& r : j.at("rows")) {
            std::vector<Cell> row;
            for (const auto& c : r) row.push_back(cell_from_json(c));
            t.rows.push_back(std::move(row));
        }
        t.summary = j.at("summary");
        return t;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed report: ") + e.what());
    }
}

void emit_report(const ReportTable& table, const std::filesystem::path& path, ReportFormat format) {
    const std::string text = format == ReportFormat::csv ? render_csv(table) : render_json(table);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open report file " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("failed writing report file " + path.string());
}

}  // namespace gsm
