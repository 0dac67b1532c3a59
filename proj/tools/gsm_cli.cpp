// Command-line front end: single queries, sieve counts, partitions and
// config-driven experiments.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gsm/asymptotics.hpp"
#include "gsm/errors.hpp"
#include "gsm/harness.hpp"
#include "gsm/montecarlo.hpp"
#include "gsm/partitions.hpp"
#include "gsm/prime_engine.hpp"
#include "gsm/report.hpp"
#include "gsm/smirnov.hpp"

namespace {

using namespace gsm;

struct GlobalOptions {
    unsigned threads = 0;
    std::uint64_t capacity = kDefaultCapacity;
    std::string cache_dir;

    SieveConfig sieve() const {
        SieveConfig cfg;
        cfg.threads = threads;
        cfg.capacity = capacity;
        if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
        return cfg;
    }
};

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::string render(const ReportTable& t, ReportFormat f) { return f == ReportFormat::csv ? render_csv(t) : render_json(t); }

struct QArgs {
    int m = 0;
    std::string u, v;
    std::string mode = "exact";
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
};

int run_q(const QArgs& a, const GlobalOptions& g) {
    const BoundaryQuery q(a.m, parse_rational(a.u), parse_rational(a.v));
    Json out;
    out["m"] = q.m();
    out["u"] = to_string(q.u());
    out["v"] = to_string(q.v());
    out["w"] = to_string(q.w());
    out["mode"] = a.mode;
    auto put = [&out](const ProbabilityResult& r) {
        out["value"] = r.value;
        out["arithmetic"] = r.mode == ResultMode::exact_rational ? "exact" : "float";
        out["abs_error_bound"] = r.abs_error_bound;
        if (r.exact) out["exact"] = to_string(*r.exact);
    };
    if (a.mode == "exact") {
        put(q_exact(q));
    } else if (a.mode == "steck") {
        put(q_steck(q));
    } else if (a.mode == "reflect") {
        put(q_reflect_upper(q));
    } else if (a.mode == "mc") {
        McConfig cfg;
        cfg.samples = a.samples;
        cfg.seed = a.seed;
        cfg.m = q.m();
        cfg.threads = g.threads;
        const McEstimate e = q_mc(q, cfg);
        out["value"] = e.p_hat;
        out["stderr"] = e.std_error;
        out["samples"] = e.samples;
        out["seed"] = e.seed;
        out["audit_mismatches"] = e.audit_mismatches;
    } else if (a.mode == "approx") {
        out["value"] = q_approx(q.m(), q.u_double(), q.w_double());
    } else {
        const EnvelopeValue env = q_envelope(q.m(), q.u_double(), q.w_double());
        out["value"] = env.value;
        out["asserted"] = env.asserted;
    }
    std::cout << out.dump() << "\n";
    return 0;
}

struct SieveArgs {
    std::uint64_t x = 0;
    double alpha = 1.0;
    double beta = 0.0;
    std::string constraint = "none";
    std::string out;
    std::string format = "csv";
};

int run_sieve(const SieveArgs& a, const GlobalOptions& g) {
    CountQuery query;
    query.x = a.x;
    query.alpha = a.alpha;
    query.beta = a.beta;
    query.constraint = parse_constraint(a.constraint);
    const ReportFormat format = parse_format(a.format);
    const CountTable table = count_constrained(query, g.sieve());
    ReportTable t;
    t.schema = "sieve-counts";
    t.schema_version = 1;
    t.columns = {"k", "count"};
    for (int k = 0; k <= kMaxOmega; ++k)
        t.rows.push_back({static_cast<std::uint64_t>(k), table.at(k)});
    t.summary["x"] = table.x;
    t.summary["alpha"] = table.alpha;
    t.summary["beta"] = table.beta;
    t.summary["constraint"] = to_string(table.constraint);
    t.summary["total"] = table.total();
    write_output(render(t, format), a.out);
    return 0;
}

struct CorollaryArgs {
    std::uint64_t x = 0;
    double beta = 0.0;
    std::string side;
    std::string out;
};

int run_corollary(const CorollaryArgs& a, const GlobalOptions& g) {
    const CorollarySide side = parse_side(a.side);
    const std::uint64_t count = count_corollary(a.x, a.beta, side, g.sieve());
    const double normalizer = (a.beta + 1.0) * static_cast<double>(a.x) / std::sqrt(loglog(static_cast<double>(a.x)));
    ReportTable t;
    t.schema = "corollary-count";
    t.schema_version = 1;
    t.columns = {"x", "beta", "side", "count", "normalizer", "ratio"};
    t.rows.push_back({a.x, a.beta, to_string(side), count, normalizer, static_cast<double>(count) / normalizer});
    write_output(render_csv(t), a.out);
    return 0;
}

struct PartitionArgs {
    std::optional<int> lambda_j;
    std::optional<double> e_part_q;
    bool approximate = false;
    std::string out;
};

int run_partitions(const PartitionArgs& a, const GlobalOptions& g) {
    std::ostringstream csv;
    bool audit_ok = true;
    if (a.lambda_j) {
        const LambdaTable table =
            build_lambda(*a.lambda_j, a.approximate ? LambdaMode::approximate : LambdaMode::exact, g.sieve());
        const LambdaAudit audit = audit_lambda(table, g.sieve());
        write_lambda_csv(csv, table);
        std::cerr << "lambda audit: " << (audit.ok() ? "ok" : "FAILED " + audit.detail)
                  << " measured_K=" << table.measured_K << "\n";
        audit_ok = audit.ok();
    } else {
        const EPartition part = build_E(*a.e_part_q, g.sieve());
        const EAudit audit = audit_E(part);
        write_e_csv(csv, part);
        std::cerr << "E audit: " << (audit.ok() ? "ok" : "FAILED " + audit.detail) << " sets=" << part.sets.size()
                  << " K'=" << audit.kprime << " bound=" << audit.set_bound << "\n";
        audit_ok = audit.ok();
    }
    write_output(csv.str(), a.out);
    if (!audit_ok) throw InvariantViolation("partition audit failed");
    return 0;
}

struct ExperimentArgs {
    std::string config;
    std::string out_dir;
};

int run_experiment_cmd(const ExperimentArgs& a, const GlobalOptions& g) {
    const ExperimentConfig cfg = load_config(a.config);
    const ReportTable table = run_experiment(cfg, g.sieve());
    std::filesystem::create_directories(a.out_dir);
    const std::string name =
        cfg.output_path.empty() ? to_string(cfg.kind) + "." + to_string(cfg.format) : cfg.output_path;
    const std::filesystem::path path = std::filesystem::path(a.out_dir) / name;
    emit_report(table, path, cfg.format);
    std::cout << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-crossing probabilities and prime-factor counting experiments"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--threads", global.threads, "Worker threads (0 = all cores)");
    app.add_option("--capacity", global.capacity, "Largest sieve bound")->check(CLI::Range(std::uint64_t{2}, kMaxCapacity));
    app.add_option("--cache-dir", global.cache_dir, "Directory for cached count tables");

    QArgs q;
    auto* q_cmd = app.add_subcommand("q", "Evaluate Q_m(u, v)");
    q_cmd->add_option("--m", q.m, "Order m")->required();
    q_cmd->add_option("--u", q.u, "Intercept u (decimal or p/q)")->required();
    q_cmd->add_option("--v", q.v, "Slope v (decimal or p/q)")->required();
    q_cmd->add_option("--mode", q.mode)->check(CLI::IsMember({"exact", "steck", "reflect", "mc", "approx", "envelope"}));
    q_cmd->add_option("--samples", q.samples, "Monte Carlo samples");
    q_cmd->add_option("--seed", q.seed, "Monte Carlo seed");

    SieveArgs s;
    auto* sieve_cmd = app.add_subcommand("sieve", "Count n <= x by omega(n) under a prime constraint");
    sieve_cmd->add_option("--x", s.x)->required();
    sieve_cmd->add_option("--alpha", s.alpha);
    sieve_cmd->add_option("--beta", s.beta);
    sieve_cmd->add_option("--constraint", s.constraint)->check(CLI::IsMember({"lower", "upper", "none"}));
    sieve_cmd->add_option("--out", s.out);
    sieve_cmd->add_option("--format", s.format)->check(CLI::IsMember({"csv", "json"}));

    CorollaryArgs c;
    auto* cor_cmd = app.add_subcommand("corollary", "Count n <= x with omega(n, t) bounded for all t");
    cor_cmd->add_option("--x", c.x)->required();
    cor_cmd->add_option("--beta", c.beta)->required();
    cor_cmd->add_option("--side", c.side)->required()->check(CLI::IsMember({"upper", "lower"}));
    cor_cmd->add_option("--out", c.out);

    PartitionArgs p;
    auto* part_cmd = app.add_subcommand("partitions", "Build and audit the prime partitions");
    auto* lj = part_cmd->add_option("--lambda-j", p.lambda_j, "Number of lambda blocks");
    auto* eq = part_cmd->add_option("--e-part-q", p.e_part_q, "Bound Q of the E partition");
    lj->excludes(eq);
    part_cmd->add_flag("--approximate", p.approximate, "Estimate lambda blocks past the sieve capacity");
    part_cmd->add_option("--out", p.out);

    ExperimentArgs e;
    auto* exp_cmd = app.add_subcommand("experiment", "Run a configured experiment");
    exp_cmd->add_option("--config", e.config)->required();
    exp_cmd->add_option("--out", e.out_dir)->required();

    try {
        app.parse(argc, argv);
        if (part_cmd->parsed() && !p.lambda_j && !p.e_part_q)
            throw CLI::ValidationError("partitions needs --lambda-j or --e-part-q");
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (q_cmd->parsed()) return run_q(q, global);
        if (sieve_cmd->parsed()) return run_sieve(s, global);
        if (cor_cmd->parsed()) return run_corollary(c, global);
        if (part_cmd->parsed()) return run_partitions(p, global);
        return run_experiment_cmd(e, global);
    } catch (const InvariantViolation& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return 3;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
