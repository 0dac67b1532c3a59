#pragma once

// Two partitions of the primes.
//
// Lambda blocks: lambda_0 = 1.9 and lambda_j is the largest prime with
//   sum_{lambda_{j-1} < p <= lambda_j} 1/p <= 1;
// G_j is the set of primes in (lambda_{j-1}, lambda_j].
//
// E sets: for Q >= e^10 and gamma = 1/log Q, the primes <= Q split into sets
// E_j with sum_{p in E_j, f >= 1} p^{-f(1-gamma)} <= 2 and log2 p close to 2j.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "gsm/prime_engine.hpp"

namespace gsm {

inline constexpr double kLambdaZero = 1.9;

enum class LambdaMode { exact, approximate };

struct LambdaBlock {
    int j = 0;
    bool exact = true;
    std::uint64_t p_min = 0;       // smallest prime of G_j (exact blocks)
    std::uint64_t lambda = 0;      // lambda_j (exact blocks)
    std::uint64_t next_prime = 0;  // first prime after lambda_j
    std::uint64_t count = 0;       // |G_j|
    long double reciprocal_sum = 0.0L;
    double log2_lambda = 0.0;      // estimate for approximate blocks
};

struct LambdaTable {
    std::vector<LambdaBlock> blocks;  // blocks[i].j == i + 1
    int j_max_exact = 0;
    double measured_K = 0.0;
};

// Exact mode throws CapacityError once lambda_j would pass cfg.capacity.
// Approximate mode continues past that point with
// log2 lambda_j ~ log2 lambda_J + (j - J), J the last exact block, and
// labels those blocks exact = false.
LambdaTable build_lambda(int J, LambdaMode mode = LambdaMode::exact, const SieveConfig& cfg = {});

// max |log2 p - j| over the primes of the exact blocks.
double measure_K(const LambdaTable& table);

struct LambdaAudit {
    bool sums_ok = true;     // every block sum <= 1
    bool maximal = true;     // adding the next prime pushes it past 1
    bool contiguous = true;  // blocks tile the primes from 2 upward
    bool mertens_ok = true;  // |log2 lambda_j - j| <= 2
    std::string detail;
    bool ok() const { return sums_ok && maximal && contiguous && mertens_ok; }
};

// Re-derives every exact block from a fresh prime list.
LambdaAudit audit_lambda(const LambdaTable& table, const SieveConfig& cfg = {});

// sum_{f >= 1} p^{-f(1 - gamma)} in closed form.
long double prime_power_budget(std::uint64_t p, double gamma);

struct ESet {
    int j = 0;
    int window = 0;  // floor((log2 p + 1) / 2), shared by every member
    std::uint64_t p_min = 0;
    std::uint64_t p_max = 0;
    std::uint64_t count = 0;
    long double budget = 0.0L;
};

struct EPartition {
    double Q = 0.0;
    double gamma = 0.0;
    std::vector<ESet> sets;  // members are the primes in [p_min, p_max]
    double measured_Kprime = 0.0;
};

// Greedy: primes ascending, a new set whenever the log2-window (width 2)
// changes or the budget would pass 2. Throws DomainError unless
// e^10 <= Q <= cfg.capacity, InvariantViolation if a single prime exceeds
// the budget.
EPartition build_E(double Q, const SieveConfig& cfg = {});

struct EAudit {
    bool partition_ok = true;
    bool budgets_ok = true;
    bool window_ok = true;
    bool count_ok = true;
    double kprime = 0.0;
    double set_bound = 0.0;  // 0.5 log2 Q + K'
    std::string detail;
    bool ok() const { return partition_ok && budgets_ok && window_ok && count_ok; }
};

EAudit audit_E(const EPartition& partition);

// CSV columns: j,p_min,p_max,count,reciprocal_sum,exact,log2_p_max
void write_lambda_csv(std::ostream& out, const LambdaTable& table);
// CSV columns: j,p_min,p_max,count,budget_sum
void write_e_csv(std::ostream& out, const EPartition& partition);

}  // namespace gsm
