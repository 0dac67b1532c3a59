#pragma once
// Experiment configs, the experiments themselves, and their report tables.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsm/asymptotics.hpp"
#include "gsm/prime_engine.hpp"
#include "gsm/report.hpp"

namespace gsm {

enum class ExperimentKind { theorem_N, theorem_M, corollary, smirnov_convergence, heuristic_approx, envelope_scan };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& s);

// Field use per kind:
//   theorem-N/M          x_list = x, beta_list = beta, k_range = [lo, hi] (empty: central range)
//   corollary            x_list = x, beta_list = beta
//   smirnov-convergence  x_list = m, beta_list = lambda
//   heuristic-approx     x_list = x, beta_list = beta, k_range = [lo, hi] over k (k - 1 in 1..3)
//   envelope-scan        x_list = m, beta_list = values used for both u and w;
//                        mc_samples > 0 adds a Monte Carlo column
// output_path is the report file name inside the output directory.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::theorem_N;
    std::vector<double> x_list;
    double alpha = 1.0;
    std::vector<double> beta_list;
    std::vector<int> k_range;
    double eps = kDefaultEps;
    double A = kDefaultA;
    std::uint64_t mc_samples = 0;
    std::uint64_t seed = 0;
    std::string output_path;
    ReportFormat format = ReportFormat::csv;

    bool operator==(const ExperimentConfig&) const = default;
};

// Throws DomainError on unknown or ill-typed fields, or values outside the
// module capacities.
ExperimentConfig parse_config(const Json& j);
Json to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& cfg);

struct RatioCell {
    CountMode mode = CountMode::N;
    double x = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    int k = 0;
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    std::optional<std::uint64_t> count;
    std::optional<std::uint64_t> pi_k;
    double envelope = 0.0;
    std::optional<double> ratio;  // count / (envelope pi_k) when the denominator is positive
    HypothesisReport hypotheses;
    bool hypotheses_hold = false;
    bool degenerate = false;  // no n can satisfy the constraint
    std::string error;        // set when the cell could not be evaluated
};

struct RatioSummary {
    std::size_t cells = 0;
    std::size_t cells_used = 0;  // ratio present and every hypothesis true
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> median;
};

struct RatioReport {
    ExperimentKind kind = ExperimentKind::theorem_N;
    std::vector<RatioCell> cells;
    RatioSummary summary;
};

// Central range [log2x - 2 sqrt(log2x), log2x + 2 sqrt(log2x)] clipped to k >= 1.
std::vector<int> central_k_range(double x);

RatioReport run_theorem_experiment(const ExperimentConfig& cfg, const SieveConfig& sieve = {});
ReportTable to_table(const RatioReport& report);

struct CorollaryCell {
    double x = 0.0;
    double beta = 0.0;
    CorollarySide side = CorollarySide::upper;
    std::uint64_t count = 0;
    double normalizer = 0.0;  // (beta + 1) x / sqrt(log2 x)
    double ratio = 0.0;
    // upper: sum_k N_k(x; 1, beta). lower: sum over k >= log2x - beta of M_k(x; 1, beta - 1).
    std::uint64_t identity_sum = 0;
    bool identity_ok = false;
    // lower only: sum over k < log2x - beta of M_k(x; 1, beta - 1), and sqrt(x) (log x)^2.
    std::optional<std::uint64_t> discrepancy;
    std::optional<double> discrepancy_bound;
    bool beta_in_range = false;  // 0 <= beta <= sqrt(log2 x)
    std::string error;
};

struct CorollaryReport {
    std::vector<CorollaryCell> cells;
};

CorollaryReport run_corollary_experiment(const ExperimentConfig& cfg, const SieveConfig& sieve = {});
ReportTable to_table(const CorollaryReport& report);

// Rows (lambda, m, u, w, q_exact, limit, abs_diff, scale = (u+w)/m, ratio = abs_diff/scale, ...).
ReportTable run_smirnov_convergence(const ExperimentConfig& cfg, unsigned threads = 0);

// Left side of the partial-summation heuristic with f the indicator of
// log2 p_i >= alpha i - beta, over primes p_1 < ... < p_m <= x. Nested suffix
// sums keep the cost at O(m pi(x)).
long double heuristic_lhs(std::span<const std::uint32_t> primes_to_x, double alpha, double beta, int m);
// (log2 x)^m Q_m(beta/alpha, log2x/alpha) / m!.
double heuristic_rhs(double x, double alpha, double beta, int m);

ReportTable run_heuristic_approx_check(const ExperimentConfig& cfg, const SieveConfig& sieve = {});

ReportTable run_envelope_scan(const ExperimentConfig& cfg, unsigned threads = 0);

// Dispatches on cfg.kind.
ReportTable run_experiment(const ExperimentConfig& cfg, const SieveConfig& sieve = {});

}  // namespace gsm
