#include "gsm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsm/errors.hpp"
#include "gsm/montecarlo.hpp"
#include "gsm/parallel.hpp"
#include "gsm/smirnov.hpp"

namespace gsm {

namespace {

Cell opt_cell(const std::optional<std::uint64_t>& v) {
    if (v) return *v;
    return std::monostate{};
}

Cell opt_cell(const std::optional<double>& v) {
    if (v) return *v;
    return std::monostate{};
}

Cell tri_cell(Tri t) {
    if (t == Tri::indeterminate) return std::string("na");
    return t == Tri::yes;
}

Json opt_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

std::uint64_t as_count(double x) { return static_cast<std::uint64_t>(x); }

std::uint64_t sum_counts(const std::array<std::uint64_t, kMaxOmega + 1>& counts) {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t count_at(const std::array<std::uint64_t, kMaxOmega + 1>& counts, int k) {
    return k >= 0 && k <= kMaxOmega ? counts[static_cast<std::size_t>(k)] : 0;
}

RatioSummary summarize(const std::vector<RatioCell>& cells) {
    RatioSummary s;
    s.cells = cells.size();
    std::vector<double> used;
    for (const auto& c : cells)
        if (c.ratio && c.hypotheses_hold && c.error.empty()) used.push_back(*c.ratio);
    s.cells_used = used.size();
    if (used.empty()) return s;
    std::sort(used.begin(), used.end());
    s.min = used.front();
    s.max = used.back();
    const std::size_t mid = used.size() / 2;
    s.median = used.size() % 2 ? used[mid] : 0.5 * (used[mid - 1] + used[mid]);
    return s;
}

}  // namespace

std::vector<int> central_k_range(double x) {
    const double l = loglog(x);
    const double half = 2.0 * std::sqrt(l);
    const int lo = std::max(1, static_cast<int>(std::ceil(l - half)));
    const int hi = static_cast<int>(std::floor(l + half));
    std::vector<int> ks;
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
}

RatioReport run_theorem_experiment(const ExperimentConfig& cfg, const SieveConfig& sieve) {
    if (cfg.kind != ExperimentKind::theorem_N && cfg.kind != ExperimentKind::theorem_M)
        throw DomainError("run_theorem_experiment needs kind theorem-N or theorem-M");
    validate(cfg);
    const CountMode mode = cfg.kind == ExperimentKind::theorem_N ? CountMode::N : CountMode::M;
    PrimeCountCache prime_counter(sieve);
    const PrimeCounter counter = [&prime_counter](std::uint64_t y) { return prime_counter(y); };
    const std::uint64_t counter_limit = std::min(sieve.capacity, kPrimeCounterLimit);

    RatioReport report;
    report.kind = cfg.kind;
    for (double xd : cfg.x_list) {
        const std::uint64_t x = as_count(xd);
        std::vector<Criterion> criteria{{Criterion::Kind::all, 1.0, 0.0}};
        for (double beta : cfg.beta_list)
            criteria.push_back(
                {mode == CountMode::N ? Criterion::Kind::lower : Criterion::Kind::upper, cfg.alpha, beta});

        std::vector<std::array<std::uint64_t, kMaxOmega + 1>> tables;
        std::string error;
        try {
            tables = count_batch(x, criteria, sieve);
        } catch (const CapacityError& e) {
            error = std::string("capacity: ") + e.what();
        }

        const std::vector<int> ks =
            cfg.k_range.empty() ? central_k_range(xd) : [&] {
                std::vector<int> r;
                for (int k = cfg.k_range[0]; k <= cfg.k_range[1]; ++k) r.push_back(k);
                return r;
            }();

        for (std::size_t b = 0; b < cfg.beta_list.size(); ++b) {
            const double beta = cfg.beta_list[b];
            for (int k : ks) {
                RatioCell cell;
                cell.mode = mode;
                cell.x = xd;
                cell.alpha = cfg.alpha;
                cell.beta = beta;
                cell.k = k;
                const TheoremParams p = map_params(xd, cfg.alpha, beta, k, mode);
                cell.u = p.u;
                cell.v = p.v;
                cell.w = p.w;
                cell.envelope = theorem_envelope(p);
                cell.hypotheses = check_hypotheses(p, cfg.eps, cfg.A, counter, counter_limit);
                cell.hypotheses_hold = cell.hypotheses.holds(mode);
                cell.degenerate = mode == CountMode::N ? cfg.alpha * k - beta > p.log2x
                                                       : upper_cutoff(cfg.alpha + beta) < 2;
                cell.error = error;
                if (error.empty()) {
                    cell.pi_k = count_at(tables[0], k);
                    cell.count = count_at(tables[b + 1], k);
                    const double denom = cell.envelope * static_cast<double>(*cell.pi_k);
                    if (denom > 0.0) cell.ratio = static_cast<double>(*cell.count) / denom;
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }
    report.summary = summarize(report.cells);
    return report;
}

ReportTable to_table(const RatioReport& report) {
    ReportTable t;
    t.schema = "theorem-ratio";
    t.schema_version = 1;
    t.columns = {"x",     "alpha",   "beta",     "k",        "u",      "v",      "w",       "count",
                 "pi_k",  "envelope", "ratio",   "hyp_beta", "hyp_ab", "hyp_w",  "hyp_exp1", "hyp_primes"};
    std::size_t errors = 0;
    for (const auto& c : report.cells) {
        if (!c.error.empty()) ++errors;
        const auto& h = c.hypotheses;
        std::vector<Cell> row{c.x,  c.alpha, c.beta, static_cast<std::uint64_t>(c.k), c.u, c.v, c.w,
                              opt_cell(c.count), opt_cell(c.pi_k), c.envelope, opt_cell(c.ratio)};
        if (c.mode == CountMode::N) {
            row.insert(row.end(), {h.beta_nonneg, h.alpha_minus_beta_le_A, h.w_ge_1_plus_eps, h.exp1_holds,
                                   std::string("na")});
        } else {
            row.insert(row.end(), {h.u_ge_1, std::string("na"), h.w_ge_0, std::string("na"),
                                   tri_cell(h.enough_primes)});
        }
        t.rows.push_back(std::move(row));
    }
    const auto& s = report.summary;
    t.summary["kind"] = to_string(report.kind);
    t.summary["cells"] = s.cells;
    t.summary["cells_used"] = s.cells_used;
    t.summary["cells_with_errors"] = errors;
    t.summary["ratio_min"] = opt_json(s.min);
    t.summary["ratio_max"] = opt_json(s.max);
    t.summary["ratio_median"] = opt_json(s.median);
    return t;
}

CorollaryReport run_corollary_experiment(const ExperimentConfig& cfg, const SieveConfig& sieve) {
    if (cfg.kind != ExperimentKind::corollary) throw DomainError("run_corollary_experiment needs kind corollary");
    validate(cfg);
    CorollaryReport report;
    for (double xd : cfg.x_list) {
        const std::uint64_t x = as_count(xd);
        const double l = loglog(xd);
        std::vector<Criterion> criteria;
        for (double beta : cfg.beta_list) {
            criteria.push_back({Criterion::Kind::corollary_upper, 1.0, beta});
            criteria.push_back({Criterion::Kind::corollary_lower, 1.0, beta});
            criteria.push_back({Criterion::Kind::lower, 1.0, beta});
            criteria.push_back({Criterion::Kind::upper, 1.0, beta - 1.0});
        }
        std::vector<std::array<std::uint64_t, kMaxOmega + 1>> tables;
        std::string error;
        try {
            tables = count_batch(x, criteria, sieve);
        } catch (const CapacityError& e) {
            error = std::string("capacity: ") + e.what();
        }
        for (std::size_t b = 0; b < cfg.beta_list.size(); ++b) {
            const double beta = cfg.beta_list[b];
            for (CorollarySide side : {CorollarySide::upper, CorollarySide::lower}) {
                CorollaryCell cell;
                cell.x = xd;
                cell.beta = beta;
                cell.side = side;
                cell.normalizer = (beta + 1.0) * xd / std::sqrt(l);
                cell.beta_in_range = beta >= 0.0 && beta <= std::sqrt(l);
                cell.error = error;
                if (error.empty()) {
                    const auto& upper = tables[4 * b];
                    const auto& lower = tables[4 * b + 1];
                    const auto& n_table = tables[4 * b + 2];
                    const auto& m_table = tables[4 * b + 3];
                    if (side == CorollarySide::upper) {
                        cell.count = sum_counts(upper);
                        cell.identity_sum = sum_counts(n_table);
                    } else {
                        cell.count = sum_counts(lower);
                        std::uint64_t kept = 0, dropped = 0;
                        for (int k = 0; k <= kMaxOmega; ++k)
                            (k >= l - beta ? kept : dropped) += count_at(m_table, k);
                        cell.identity_sum = kept;
                        cell.discrepancy = dropped;
                        cell.discrepancy_bound = std::sqrt(xd) * std::pow(std::log(xd), 2);
                    }
                    cell.identity_ok = cell.count == cell.identity_sum;
                    cell.ratio = static_cast<double>(cell.count) / cell.normalizer;
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

ReportTable to_table(const CorollaryReport& report) {
    ReportTable t;
    t.schema = "corollary-ratio";
    t.schema_version = 1;
    t.columns = {"x",           "beta",        "side",        "count",      "normalizer",       "ratio",
                 "identity_sum", "identity_ok", "discrepancy", "discrepancy_bound", "beta_in_range"};
    std::size_t identity_failures = 0, errors = 0;
    std::optional<double> lo, hi;
    for (const auto& c : report.cells) {
        if (!c.error.empty()) {
            ++errors;
            t.rows.push_back({c.x, c.beta, to_string(c.side), std::monostate{}, c.normalizer, std::monostate{},
                              std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{},
                              c.beta_in_range});
            continue;
        }
        if (!c.identity_ok) ++identity_failures;
        if (c.beta_in_range) {
            lo = lo ? std::min(*lo, c.ratio) : c.ratio;
            hi = hi ? std::max(*hi, c.ratio) : c.ratio;
        }
        t.rows.push_back({c.x, c.beta, to_string(c.side), c.count, c.normalizer, c.ratio, c.identity_sum,
                          c.identity_ok, opt_cell(c.discrepancy), opt_cell(c.discrepancy_bound), c.beta_in_range});
    }
    t.summary["kind"] = "corollary";
    t.summary["cells"] = report.cells.size();
    t.summary["cells_with_errors"] = errors;
    t.summary["identity_failures"] = identity_failures;
    t.summary["ratio_min"] = opt_json(lo);
    t.summary["ratio_max"] = opt_json(hi);
    return t;
}

ReportTable run_smirnov_convergence(const ExperimentConfig& cfg, unsigned threads) {
    if (cfg.kind != ExperimentKind::smirnov_convergence)
        throw DomainError("run_smirnov_convergence needs kind smirnov-convergence");
    validate(cfg);
    struct Task {
        double lambda;
        int m;
    };
    std::vector<Task> tasks;
    for (double lambda : cfg.beta_list)
        for (double m : cfg.x_list) tasks.push_back({lambda, static_cast<int>(m)});

    std::vector<std::vector<Cell>> rows(tasks.size());
    std::vector<double> diffs(tasks.size());
    parallel_for(tasks.size(), threads, [&](std::size_t i) {
        const auto [lambda, m] = tasks[i];
        const double u = lambda * std::sqrt(static_cast<double>(m));
        const ProbabilityResult q = q_exact(BoundaryQuery::from_double(m, u, m));
        const double limit = smirnov_limit(lambda);
        const double diff = std::fabs(q.value - limit);
        const double scale = 2.0 * u / m;
        diffs[i] = diff;
        rows[i] = {lambda,
                   static_cast<std::uint64_t>(m),
                   u,
                   u,
                   q.value,
                   limit,
                   diff,
                   scale,
                   scale > 0.0 ? Cell(diff / scale) : Cell(std::monostate{}),
                   q.abs_error_bound,
                   std::string(q.mode == ResultMode::exact_rational ? "exact" : "float")};
    });

    ReportTable t;
    t.schema = "smirnov-convergence";
    t.schema_version = 1;
    t.columns = {"lambda", "m", "u", "w", "q_exact", "limit", "abs_diff", "scale", "ratio", "error_bound", "mode"};
    t.rows = std::move(rows);
    Json mono = Json::array();
    const std::size_t per = cfg.x_list.size();
    for (std::size_t l = 0; l < cfg.beta_list.size(); ++l) {
        bool ok = true;
        for (std::size_t i = 1; i < per; ++i)
            if (diffs[l * per + i] > diffs[l * per + i - 1]) ok = false;
        mono.push_back(Json{{"lambda", cfg.beta_list[l]}, {"nonincreasing", ok}});
    }
    t.summary["kind"] = "smirnov-convergence";
    t.summary["monotone"] = std::move(mono);
    return t;
}

long double heuristic_lhs(std::span<const std::uint32_t> primes, double alpha, double beta, int m) {
    if (m < 1) throw DomainError("heuristic_lhs needs m >= 1");
    const std::size_t n = primes.size();
    // suffix[i] = sum over i' >= i of the level-(j+1) weight at position i'.
    std::vector<long double> suffix(n + 1, 0.0L), next(n + 1, 0.0L);
    for (int j = m; j >= 1; --j) {
        const std::uint64_t cutoff = lower_cutoff(alpha * j - beta);
        next[n] = 0.0L;
        for (std::size_t i = n; i-- > 0;) {
            long double weight = 0.0L;
            if (primes[i] >= cutoff) {
                weight = 1.0L / primes[i];
                if (j < m) weight *= suffix[i + 1];
            }
            next[i] = next[i + 1] + weight;
        }
        std::swap(suffix, next);
    }
    return suffix[0];
}

double heuristic_rhs(double x, double alpha, double beta, int m) {
    const double l = loglog(x);
    const ProbabilityResult q = q_exact(BoundaryQuery::from_double(m, beta / alpha, l / alpha));
    return std::pow(l, m) * q.value / std::tgamma(m + 1.0);
}

ReportTable run_heuristic_approx_check(const ExperimentConfig& cfg, const SieveConfig& sieve) {
    if (cfg.kind != ExperimentKind::heuristic_approx)
        throw DomainError("run_heuristic_approx_check needs kind heuristic-approx");
    validate(cfg);
    const int k_lo = cfg.k_range.empty() ? 2 : cfg.k_range[0];
    const int k_hi = cfg.k_range.empty() ? 4 : cfg.k_range[1];
    ReportTable t;
    t.schema = "heuristic-approx";
    t.schema_version = 1;
    t.columns = {"x", "alpha", "beta", "k", "m", "lhs", "rhs", "ratio", "q"};
    for (double xd : cfg.x_list) {
        const std::vector<std::uint32_t> primes = primes_up_to(as_count(xd), sieve);
        for (double beta : cfg.beta_list) {
            for (int k = k_lo; k <= k_hi; ++k) {
                const int m = k - 1;
                const double lhs = static_cast<double>(heuristic_lhs(primes, cfg.alpha, beta, m));
                const double rhs = heuristic_rhs(xd, cfg.alpha, beta, m);
                const double q = q_exact(BoundaryQuery::from_double(m, beta / cfg.alpha, loglog(xd) / cfg.alpha)).value;
                t.rows.push_back({xd, cfg.alpha, beta, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(m),
                                  lhs, rhs, rhs > 0.0 ? Cell(lhs / rhs) : Cell(std::monostate{}), q});
            }
        }
    }
    t.summary["kind"] = "heuristic-approx";
    t.summary["rows"] = t.rows.size();
    return t;
}

ReportTable run_envelope_scan(const ExperimentConfig& cfg, unsigned threads) {
    if (cfg.kind != ExperimentKind::envelope_scan) throw DomainError("run_envelope_scan needs kind envelope-scan");
    validate(cfg);
    struct Task {
        int m;
        double u;
        double w;
    };
    std::vector<Task> tasks;
    for (double m : cfg.x_list)
        for (double u : cfg.beta_list)
            for (double w : cfg.beta_list)
                if (w + m - u > 0.0) tasks.push_back({static_cast<int>(m), u, w});

    const bool with_mc = cfg.mc_samples > 0;
    std::vector<std::vector<Cell>> rows(tasks.size());
    std::vector<std::optional<double>> ratios(tasks.size());
    std::vector<bool> asserted(tasks.size());
    parallel_for(tasks.size(), threads, [&](std::size_t i) {
        const auto [m, u, w] = tasks[i];
        const Rational ur = exact_rational(u);
        const BoundaryQuery q(m, ur, exact_rational(w) + m - ur);
        const ProbabilityResult p = q_exact(q);
        const EnvelopeValue env = q_envelope(m, u, w);
        std::optional<double> ratio;
        if (env.value > 0.0) ratio = p.value / env.value;
        ratios[i] = ratio;
        asserted[i] = env.asserted;
        Cell mc_p = std::monostate{}, mc_se = std::monostate{};
        if (with_mc) {
            McConfig mc;
            mc.samples = cfg.mc_samples;
            mc.seed = cfg.seed + i;
            mc.m = m;
            mc.threads = 1;
            const McEstimate est = q_mc(q, mc);
            mc_p = est.p_hat;
            mc_se = est.std_error;
        }
        rows[i] = {static_cast<std::uint64_t>(m), u, q.v_double(), w, p.value, p.abs_error_bound, env.value,
                   opt_cell(ratio), env.asserted, q_approx(m, u, w), mc_p, mc_se};
    });

    ReportTable t;
    t.schema = "envelope-scan";
    t.schema_version = 1;
    t.columns = {"m", "u", "v", "w", "q_exact", "error_bound", "envelope", "ratio", "asserted", "q_approx",
                 "mc_p_hat", "mc_stderr"};
    t.rows = std::move(rows);
    std::optional<std::size_t> lo, hi;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!asserted[i] || !ratios[i]) continue;
        if (!lo || *ratios[i] < *ratios[*lo]) lo = i;
        if (!hi || *ratios[i] > *ratios[*hi]) hi = i;
    }
    auto where = [&](const std::optional<std::size_t>& i) -> Json {
        if (!i) return nullptr;
        return Json{{"m", tasks[*i].m}, {"u", tasks[*i].u}, {"w", tasks[*i].w}, {"ratio", *ratios[*i]}};
    };
    t.summary["kind"] = "envelope-scan";
    t.summary["cells"] = tasks.size();
    t.summary["ratio_min"] = where(lo);
    t.summary["ratio_max"] = where(hi);
    return t;
}

ReportTable run_experiment(const ExperimentConfig& cfg, const SieveConfig& sieve) {
    switch (cfg.kind) {
        case ExperimentKind::theorem_N:
        case ExperimentKind::theorem_M:
            return to_table(run_theorem_experiment(cfg, sieve));
        case ExperimentKind::corollary:
            return to_table(run_corollary_experiment(cfg, sieve));
        case ExperimentKind::smirnov_convergence:
            return run_smirnov_convergence(cfg, sieve.threads);
        case ExperimentKind::heuristic_approx:
            return run_heuristic_approx_check(cfg, sieve);
        case ExperimentKind::envelope_scan:
            return run_envelope_scan(cfg, sieve.threads);
    }
    throw InvariantViolation("unhandled experiment kind");
}

}  // namespace gsm
