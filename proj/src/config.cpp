#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gsm/errors.hpp"
#include "gsm/harness.hpp"
#include "gsm/smirnov.hpp"

namespace gsm {

namespace {

constexpr const char* kKindNames[] = {"theorem-N",           "theorem-M",        "corollary",
                                      "smirnov-convergence", "heuristic-approx", "envelope-scan"};

const std::set<std::string>& known_fields() {
    static const std::set<std::string> fields = {"kind", "x_list",     "alpha", "beta_list", "k_range", "eps",
                                                 "A",    "mc_samples", "seed",  "output_path", "format"};
    return fields;
}

template <typename T>
T read_field(const Json& j, const char* name) {
    try {
        return j.at(name).get<T>();
    } catch (const Json::exception& e) {
        throw DomainError(std::string("config field '") + name + "': " + e.what());
    }
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

}  // namespace

std::string to_string(ExperimentKind kind) { return kKindNames[static_cast<int>(kind)]; }

ExperimentKind parse_kind(const std::string& s) {
    for (int i = 0; i < 6; ++i)
        if (s == kKindNames[i]) return static_cast<ExperimentKind>(i);
    throw DomainError("unknown experiment kind '" + s + "'");
}

ExperimentConfig parse_config(const Json& j) {
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known_fields().count(key)) throw DomainError("unknown config field '" + key + "'");
    if (!j.contains("kind")) throw DomainError("config field 'kind' is required");

    ExperimentConfig cfg;
    cfg.kind = parse_kind(read_field<std::string>(j, "kind"));
    if (j.contains("x_list")) cfg.x_list = read_field<std::vector<double>>(j, "x_list");
    if (j.contains("alpha")) cfg.alpha = read_field<double>(j, "alpha");
    if (j.contains("beta_list")) cfg.beta_list = read_field<std::vector<double>>(j, "beta_list");
    if (j.contains("k_range")) cfg.k_range = read_field<std::vector<int>>(j, "k_range");
    if (j.contains("eps")) cfg.eps = read_field<double>(j, "eps");
    if (j.contains("A")) cfg.A = read_field<double>(j, "A");
    if (j.contains("mc_samples")) cfg.mc_samples = read_field<std::uint64_t>(j, "mc_samples");
    if (j.contains("seed")) cfg.seed = read_field<std::uint64_t>(j, "seed");
    if (j.contains("output_path")) cfg.output_path = read_field<std::string>(j, "output_path");
    if (j.contains("format")) cfg.format = parse_format(read_field<std::string>(j, "format"));
    validate(cfg);
    return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
    Json j;
    j["kind"] = to_string(cfg.kind);
    j["x_list"] = cfg.x_list;
    j["alpha"] = cfg.alpha;
    j["beta_list"] = cfg.beta_list;
    j["k_range"] = cfg.k_range;
    j["eps"] = cfg.eps;
    j["A"] = cfg.A;
    j["mc_samples"] = cfg.mc_samples;
    j["seed"] = cfg.seed;
    j["output_path"] = cfg.output_path;
    j["format"] = to_string(cfg.format);
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    Json j;
    try {
        j = Json::parse(buf.str());
    } catch (const Json::exception& e) {
        throw DomainError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

void validate(const ExperimentConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) throw DomainError("alpha must be positive and finite");
    if (!(cfg.eps > 0.0)) throw DomainError("eps must be positive");
    if (!(cfg.A >= 1.0)) throw DomainError("A must be at least 1");
    for (double b : cfg.beta_list)
        if (!std::isfinite(b)) throw DomainError("beta_list entries must be finite");
    if (!cfg.k_range.empty()) {
        if (cfg.k_range.size() != 2 || cfg.k_range[0] < 1 || cfg.k_range[0] > cfg.k_range[1])
            throw DomainError("k_range must be [lo, hi] with 1 <= lo <= hi");
    }
    if (cfg.output_path.find('/') != std::string::npos || cfg.output_path == "." || cfg.output_path == "..")
        throw DomainError("output_path must be a plain file name");

    switch (cfg.kind) {
        case ExperimentKind::theorem_N:
        case ExperimentKind::theorem_M:
        case ExperimentKind::corollary:
        case ExperimentKind::heuristic_approx:
            for (double x : cfg.x_list)
                if (!is_integral(x) || x < 16.0 || x > static_cast<double>(kMaxCapacity))
                    throw DomainError("x_list entries must be integers in [16, 2^32 - 1]");
            break;
        case ExperimentKind::smirnov_convergence:
        case ExperimentKind::envelope_scan:
            for (double m : cfg.x_list)
                if (!is_integral(m) || m < 1.0 || m > 100000.0)
                    throw DomainError("x_list entries (orders m) must be integers in [1, 100000]");
            break;
    }
    if (cfg.kind == ExperimentKind::heuristic_approx && !cfg.k_range.empty() &&
        (cfg.k_range[0] < 2 || cfg.k_range[1] > 4))
        throw DomainError("heuristic-approx supports k - 1 in {1, 2, 3}");
    if (cfg.kind == ExperimentKind::smirnov_convergence)
        for (double lam : cfg.beta_list)
            if (lam < 0.0) throw DomainError("lambda values must be nonnegative");
    if (cfg.kind == ExperimentKind::envelope_scan)
        for (double uw : cfg.beta_list)
            if (uw < 0.0) throw DomainError("envelope-scan values must be nonnegative");
    if (cfg.kind == ExperimentKind::heuristic_approx)
        for (double b : cfg.beta_list)
            if (b < 0.0) throw DomainError("heuristic-approx needs beta >= 0");
}

}  // namespace gsm
