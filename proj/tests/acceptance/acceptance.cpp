// Acceptance suite: one PASS/FAIL line per criterion, plus a JSON report with
// the measured numbers (acceptance_report.json in the working directory).
//
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../common/oracles.hpp"
#include "gsm/asymptotics.hpp"
#include "gsm/harness.hpp"
#include "gsm/montecarlo.hpp"
#include "gsm/partitions.hpp"
#include "gsm/prime_engine.hpp"
#include "gsm/smirnov.hpp"

using namespace gsm;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    Json data = Json::object();

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

struct AcceptanceCheck {
    int id;
    std::string title;
    double time_limit_s;
    std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

Rational quarter(long n) {
    Rational r(n, 4);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------------------

Outcome partition_ground_truth() {
    Outcome o;
    const LambdaTable t = build_lambda(2);
    const LambdaAudit audit = audit_lambda(t);
    const auto l1 = t.blocks[0].lambda, l2 = t.blocks[1].lambda;
    o.data["lambda_1"] = l1;
    o.data["lambda_2"] = l2;
    o.data["block_2_sum"] = static_cast<double>(t.blocks[1].reciprocal_sum);
    o.data["block_2_sum_with_next_prime"] =
        static_cast<double>(t.blocks[1].reciprocal_sum) + 1.0 / static_cast<double>(t.blocks[1].next_prime);
    o.require(l1 == 3, "lambda_1 = " + std::to_string(l1) + " (expected 3)");
    o.require(l2 == 109, "lambda_2 = " + std::to_string(l2) + " (expected 109; the block sum through 109 is " +
                             fmt(o.data["block_2_sum_with_next_prime"].get<double>(), 6) + " > 1)");
    o.require(audit.maximal && audit.sums_ok && audit.contiguous, "maximality audit: " + audit.detail);
    if (o.pass) o.detail = "lambda_1 = 3, lambda_2 = 109, audit ok";
    return o;
}

Outcome oracle_triangle() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    const std::vector<int> orders{1, 2, 3, 5, 8, 13, 20, 35, 50, 80, 120, 160, 200};
    int points = 0, exact_mismatch = 0, float_mismatch = 0;
    double worst_float = 0.0;
    while (points < 50) {
        const int m = orders[static_cast<std::size_t>(points) % orders.size()];
        const Rational u = quarter(static_cast<long>(rng() % static_cast<std::uint64_t>(4 * (m + 2) + 1)));
        const Rational w = quarter(static_cast<long>(rng() % static_cast<std::uint64_t>(4 * (m + 1) + 1)) - 4);
        const Rational v = w + m - u;
        if (v <= 0) continue;
        ++points;
        const BoundaryQuery q(m, u, v);
        const auto ex = q_exact(q, ArithmeticMode::exact_rational);
        const auto st = q_steck(q);
        const auto rf = q_reflect_upper(q, ArithmeticMode::exact_rational);
        if (*ex.exact != *st.exact || *ex.exact != *rf.exact) ++exact_mismatch;
        const auto fl = q_exact(q, ArithmeticMode::floating);
        const auto fr = q_reflect_upper(q, ArithmeticMode::floating);
        const double d = std::max(std::fabs(fl.value - st.value), std::fabs(fr.value - st.value));
        worst_float = std::max(worst_float, d);
        if (d > 1e-10) ++float_mismatch;
    }
    o.data["points"] = points;
    o.data["exact_mismatches"] = exact_mismatch;
    o.data["float_mismatches"] = float_mismatch;
    o.data["worst_float_diff"] = worst_float;
    o.require(exact_mismatch == 0, std::to_string(exact_mismatch) + " exact mismatches");
    o.require(float_mismatch == 0, std::to_string(float_mismatch) + " float diffs above 1e-10");
    o.detail = o.pass ? "50 points, rational mode identical, worst float diff " + fmt(worst_float, 3) : o.detail;
    return o;
}

Outcome monte_carlo_consistency() {
    Outcome o;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int within = 0;
    Json rows = Json::array();
    // Queries with Q in [0.05, 0.95]: near 0 or 1 every sample agrees, the
    // binomial stderr collapses to 0 and the 4-stderr test degenerates.
    for (int i = 0; i < 20; ++i) {
        int m = 0;
        double u = 0.0, w = 0.0, exact = 0.0;
        BoundaryQuery q(1, 0, 1);
        for (;;) {
            m = 1 + static_cast<int>(rng() % 30);
            u = std::round(unit(rng) * (m + 1) * 8.0) / 8.0;
            w = std::round((0.125 + unit(rng) * m) * 8.0) / 8.0;
            if (w + m - u <= 0.0) continue;
            q = BoundaryQuery::from_double(m, u, w + m - u);
            exact = q_exact(q).value;
            if (exact >= 0.05 && exact <= 0.95) break;
        }
        McConfig cfg;
        cfg.samples = 1'000'000;
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        cfg.m = m;
        const McEstimate est = q_mc(q, cfg);
        const bool ok = std::fabs(est.p_hat - exact) <= 4.0 * est.std_error && est.audit_mismatches == 0;
        within += ok ? 1 : 0;
        rows.push_back({{"m", m}, {"u", u}, {"w", w}, {"exact", exact}, {"p_hat", est.p_hat},
                        {"stderr", est.std_error}, {"ok", ok}});
    }
    o.data["queries"] = rows;
    o.data["within_4_stderr"] = within;
    o.require(within >= 19, std::to_string(within) + "/20 within 4 stderr");
    if (o.pass) o.detail = std::to_string(within) + "/20 queries within 4 stderr at N = 1e6";
    return o;
}

Outcome smirnov_limit_check() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::smirnov_convergence;
    cfg.x_list = {100, 400, 1600};
    cfg.beta_list = {0.5, 1.0, 1.5};
    const ReportTable t = run_smirnov_convergence(cfg);
    Json rows = Json::array();
    double worst_fraction = 0.0;
    for (const auto& row : t.rows) {
        const double diff = std::get<double>(row[6]);
        const double scale = std::get<double>(row[7]);
        worst_fraction = std::max(worst_fraction, diff / (5.0 * scale));
        o.require(diff <= 5.0 * scale, "diff above 5 (u+w)/m");
        rows.push_back({{"lambda", std::get<double>(row[0])}, {"m", std::get<std::uint64_t>(row[1])},
                        {"q_exact", std::get<double>(row[4])}, {"abs_diff", diff}});
    }
    for (const auto& mono : t.summary["monotone"])
        o.require(mono["nonincreasing"].get<bool>(),
                  "diff not nonincreasing for lambda " + fmt(mono["lambda"].get<double>()));
    o.data["rows"] = rows;
    o.data["worst_fraction_of_cap"] = worst_fraction;
    if (o.pass) o.detail = "9 cells within cap (worst " + fmt(worst_fraction, 3) + " of cap), monotone in m";
    return o;
}

Outcome envelope_check() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::envelope_scan;
    cfg.x_list = {10, 30, 100, 200, 500};
    cfg.beta_list = {1, 2, 3, 5, 10, 20, 50};
    const ReportTable t = run_envelope_scan(cfg);
    std::size_t cells = 0;
    for (const auto& row : t.rows) {
        if (!std::get<bool>(row[8])) continue;
        ++cells;
        const double r = std::get<double>(row[7]);
        o.require(r >= 0.01 && r <= 100.0, "ratio " + fmt(r) + " out of [0.01, 100]");
    }
    o.data["cells"] = cells;
    o.data["ratio_min"] = t.summary["ratio_min"];
    o.data["ratio_max"] = t.summary["ratio_max"];
    if (o.pass)
        o.detail = std::to_string(cells) + " cells; ratio range [" +
                   fmt(t.summary["ratio_min"]["ratio"].get<double>()) + ", " +
                   fmt(t.summary["ratio_max"]["ratio"].get<double>()) + "]";
    return o;
}

Outcome counting_identities() {
    Outcome o;
    for (std::uint64_t x : {1000ULL, 1'000'000ULL}) {
        const CountTable t = pi_k_table(x);
        o.require(t.total() - t.at(0) == x - 1, "sum pi_k != x - 1 at x = " + std::to_string(x));
    }
    for (std::uint64_t x : {10'000ULL, 1'000'000ULL})
        for (double beta : {0.0, 1.0, 2.0}) {
            const std::uint64_t cor = count_corollary(x, beta, CorollarySide::upper);
            const std::uint64_t sum = count_constrained({x, 1.0, beta, Constraint::lower}).total();
            o.require(cor == sum, "corollary identity fails at x = " + std::to_string(x) + ", beta = " + fmt(beta));
        }
    std::mt19937_64 rng(777);
    std::size_t checked = 0, mismatched = 0;
    SieveConfig cfg;
    cfg.capacity = kDefaultCapacity;
    for (std::uint64_t lo = 10; lo < kDefaultCapacity; lo *= 10) {
        std::uniform_int_distribution<std::uint64_t> pick(lo, std::min(lo * 10, kDefaultCapacity));
        std::vector<std::uint64_t> ns(10'000);
        for (auto& n : ns) n = pick(rng);
        for (std::uint64_t n : ns) {
            FactorProfile prof;
            sieve_profiles(n, n, [&](const FactorProfile& p) { prof = p; }, cfg);
            const auto f = oracle::trial_division(n);
            bool same = static_cast<std::size_t>(prof.omega()) == f.primes.size();
            for (std::size_t i = 0; same && i < f.primes.size(); ++i)
                same = prof.primes[i] == f.primes[i] && prof.exponents[i] == f.exponents[i];
            ++checked;
            if (!same) ++mismatched;
        }
    }
    o.data["profiles_checked"] = checked;
    o.data["profile_mismatches"] = mismatched;
    o.require(mismatched == 0, std::to_string(mismatched) + " profile mismatches");
    if (o.pass)
        o.detail = "completeness and corollary identities exact; " + std::to_string(checked) +
                   " random profiles match trial division";
    return o;
}

// Cells of one theorem with all hypotheses true: band check, then drift per
// (beta, k - round(log2 x)) over the offsets present at every x.
Outcome theorem_diagnostic_for(ExperimentKind kind, Json& data) {
    Outcome o;
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.x_list = {1e6, 1e7, 1e8};
    cfg.beta_list = {0, 1, 2};
    const RatioReport r = run_theorem_experiment(cfg);
    std::map<std::pair<double, int>, std::map<double, double>> by_offset;
    std::size_t used = 0;
    double lo = 1e300, hi = 0.0;
    for (const auto& c : r.cells) {
        if (!c.hypotheses_hold || !c.ratio) continue;
        ++used;
        lo = std::min(lo, *c.ratio);
        hi = std::max(hi, *c.ratio);
        o.require(*c.ratio >= 0.05 && *c.ratio <= 20.0,
                  "ratio " + fmt(*c.ratio) + " at x = " + fmt(c.x) + ", beta = " + fmt(c.beta) +
                      ", k = " + std::to_string(c.k));
        const int offset = c.k - static_cast<int>(std::lround(loglog(c.x)));
        by_offset[{c.beta, offset}][c.x] = *c.ratio;
    }
    double worst_drift = 1.0;
    std::size_t drift_groups = 0;
    for (const auto& [key, per_x] : by_offset) {
        if (per_x.size() != cfg.x_list.size()) continue;
        ++drift_groups;
        double mn = 1e300, mx = 0.0;
        for (const auto& [x, ratio] : per_x) {
            mn = std::min(mn, ratio);
            mx = std::max(mx, ratio);
        }
        const double drift = mx / mn;
        worst_drift = std::max(worst_drift, drift);
        o.require(drift <= 10.0, "drift x" + fmt(drift) + " at beta = " + fmt(key.first) +
                                     ", offset = " + std::to_string(key.second));
    }
    o.require(used > 0, "no cell satisfies every hypothesis");
    o.require(drift_groups > 0, "no (beta, offset) group present at all three x");
    data["cells"] = r.cells.size();
    data["cells_used"] = used;
    data["ratio_min"] = used ? lo : 0.0;
    data["ratio_max"] = hi;
    data["drift_groups"] = drift_groups;
    data["worst_drift"] = worst_drift;
    o.detail = to_string(kind) + ": " + std::to_string(used) + " cells in [" + fmt(lo) + ", " + fmt(hi) +
               "], worst drift x" + fmt(worst_drift) + " over " + std::to_string(drift_groups) + " groups" +
               (o.pass ? "" : " | " + o.detail);
    return o;
}

Outcome theorem_diagnostic() {
    Outcome o;
    Json n, m;
    const Outcome a = theorem_diagnostic_for(ExperimentKind::theorem_N, n);
    const Outcome b = theorem_diagnostic_for(ExperimentKind::theorem_M, m);
    o.pass = a.pass && b.pass;
    o.detail = a.detail + "; " + b.detail;
    o.data["theorem_N"] = n;
    o.data["theorem_M"] = m;
    return o;
}

Outcome corollary_diagnostic() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::corollary;
    cfg.x_list = {1e6, 1e7, 1e8};
    cfg.beta_list = {0, 1, 2, 3};
    const CorollaryReport r = run_corollary_experiment(cfg);
    std::map<std::pair<double, int>, std::vector<double>> groups;
    double lo = 1e300, hi = 0.0;
    Json rows = Json::array();
    for (const auto& c : r.cells) {
        lo = std::min(lo, c.ratio);
        hi = std::max(hi, c.ratio);
        o.require(c.ratio >= 0.05 && c.ratio <= 20.0, "ratio " + fmt(c.ratio) + " out of band");
        o.require(c.identity_ok, "identity failed at x = " + fmt(c.x));
        groups[{c.beta, static_cast<int>(c.side)}].push_back(c.ratio);
        if (c.side == CorollarySide::lower && c.x == 1e6)
            o.require(static_cast<double>(*c.discrepancy) <= *c.discrepancy_bound,
                      "near-identity discrepancy " + std::to_string(*c.discrepancy) + " above bound");
        Json row{{"x", c.x}, {"beta", c.beta}, {"side", to_string(c.side)}, {"count", c.count}, {"ratio", c.ratio}};
        if (c.discrepancy) row["discrepancy"] = *c.discrepancy;
        rows.push_back(row);
    }
    double worst_drift = 1.0;
    for (const auto& [key, ratios] : groups) {
        const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
        worst_drift = std::max(worst_drift, *mx / *mn);
        o.require(*mx / *mn <= 2.0, "drift x" + fmt(*mx / *mn) + " at beta = " + fmt(key.first));
    }
    o.data["rows"] = rows;
    o.data["worst_drift"] = worst_drift;
    o.detail = "ratios in [" + fmt(lo) + ", " + fmt(hi) + "], worst drift x" + fmt(worst_drift) +
               (o.pass ? "" : " | " + o.detail);
    return o;
}

Outcome heuristic_check() {
    Outcome o;
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::heuristic_approx;
    cfg.x_list = {1e6};
    cfg.beta_list = {1};
    cfg.k_range = {3, 3};
    const ReportTable t = run_heuristic_approx_check(cfg);
    const double lhs = std::get<double>(t.rows[0][5]);
    const double rhs = std::get<double>(t.rows[0][6]);
    const double ratio = lhs / rhs;
    o.data["lhs"] = lhs;
    o.data["rhs"] = rhs;
    o.data["ratio"] = ratio;
    o.require(ratio >= 0.3 && ratio <= 3.0, "ratio " + fmt(ratio) + " out of [0.3, 3]");
    o.detail = "LHS " + fmt(lhs) + ", RHS " + fmt(rhs) + ", ratio " + fmt(ratio) + (o.pass ? "" : " | " + o.detail);
    return o;
}

Outcome e_partition_audit() {
    Outcome o;
    const EPartition part = build_E(std::exp(10.0));
    const EAudit a = audit_E(part);
    o.data["sets"] = part.sets.size();
    o.data["kprime"] = a.kprime;
    o.data["set_bound"] = a.set_bound;
    o.require(a.partition_ok, "partition property");
    o.require(a.budgets_ok, "budget <= 2");
    o.require(a.window_ok, "window bound");
    o.require(a.count_ok, "set-count bound");
    o.detail = std::to_string(part.sets.size()) + " sets, K' = " + fmt(a.kprime) + ", bound " + fmt(a.set_bound) +
               (o.pass ? "" : " | " + a.detail);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<AcceptanceCheck> criteria{
        {1, "partition ground truth (lambda_1, lambda_2)", 1.0, partition_ground_truth},
        {2, "oracle triangle for Q", 30.0, oracle_triangle},
        {3, "Monte Carlo consistency", 60.0, monte_carlo_consistency},
        {4, "Smirnov limit", 120.0, smirnov_limit_check},
        {5, "envelope sandwich", 120.0, envelope_check},
        {6, "counting identities", 120.0, counting_identities},
        {7, "N_k and M_k ratio diagnostic", 300.0, theorem_diagnostic},
        {8, "omega(n, t) bound diagnostic", 600.0, corollary_diagnostic},
        {9, "partial-summation heuristic", 30.0, heuristic_check},
        {10, "E-partition audit", 60.0, e_partition_audit},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

    Json report = Json::object();
    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.time_limit_s) {
            o.pass = false;
            o.detail += "; runtime " + fmt(secs) + " s over the " + fmt(c.time_limit_s) + " s limit";
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  AC" << c.id << "  " << c.title << ": " << o.detail << "  ("
                  << fmt(secs, 3) << " s)" << std::endl;
        o.data["pass"] = o.pass;
        o.data["seconds"] = secs;
        o.data["detail"] = o.detail;
        report["AC" + std::to_string(c.id)] = o.data;
    }
    const std::string name =
        selected.empty() ? "acceptance_report.json" : "acceptance_report_" + std::to_string(*selected.begin()) + ".json";
    std::ofstream(name) << report.dump(2) << "\n";
    return failures == 0 ? 0 : 1;
}
