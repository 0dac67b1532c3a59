#pragma once

// Closed-form approximants, envelopes and theorem hypotheses for the counts
// N_k (lower inequalities log2 p_j >= alpha j - beta) and M_k (upper
// inequalities log2 p_j <= alpha j + beta). Throughout, log2 y means
// log(log(y)) with natural logarithms.

#include <cstdint>
#include <functional>
#include <string>

namespace gsm {

enum class CountMode { N, M };

std::string to_string(CountMode mode);

// log(log(y)); defined for y > 1 and negative for y < e.
double loglog(double y);

struct TheoremParams {
    double x = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    int k = 0;
    CountMode mode = CountMode::N;
    double log2x = 0.0;
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;  // always u + v - (k - 1)
};

// N: u = beta/alpha, v = log2x/alpha. M: u = k + (beta - log2x)/alpha, same v.
// Throws DomainError unless x >= 16, alpha > 0, k >= 1.
TheoremParams map_params(double x, double alpha, double beta, int k, CountMode mode);

// Same map from a precomputed log2x (lets callers pass x = e^e exactly).
TheoremParams map_params_loglog(double log2x, double alpha, double beta, int k, CountMode mode);

// 1 - exp(-2 lambda^2).
double smirnov_limit(double lambda);

// Main term 1 - exp(-2uw/m) of the uniform asymptotic formula.
double q_approx(int m, double u, double w);

struct EnvelopeValue {
    double value = 0.0;
    bool asserted = true;  // false when u < 1 or w < 1
};

// min(1, uw/m); only claimed up to constants when u >= 1 and w >= 1.
EnvelopeValue q_envelope(int m, double u, double w);

// N: min(1, (u+1) w / k). M: min(1, u (w+1) / k).
double theorem_envelope(const TheoremParams& p);

enum class Tri { no, yes, indeterminate };

std::string to_string(Tri t);

struct HypothesisReport {
    double eps = 0.1;
    double A = 3.0;

    bool k_in_range = false;            // 1 <= k <= A log2x
    bool beta_nonneg = false;           // beta >= 0
    bool alpha_minus_beta_le_A = false; // alpha - beta <= A
    bool w_ge_1_plus_eps = false;       // w >= 1 + eps
    bool exp1_holds = false;            // e^{alpha(w-1)} - e^{alpha(w-2)} >= 1 + eps
    double exp1_lhs = 0.0;
    bool u_ge_1 = false;
    bool w_ge_0 = false;
    // At least j primes <= exp exp(alpha j + beta) for 1 <= j <= k.
    Tri enough_primes = Tri::indeterminate;
    bool enough_primes_analytic = false;  // decided by the p_j upper bound

    // Conjunction of the hypotheses the given theorem uses.
    bool holds(CountMode mode) const;
};

// pi(y) for y up to `counter_limit`.
using PrimeCounter = std::function<std::uint64_t(std::uint64_t)>;

inline constexpr double kDefaultEps = 0.1;
inline constexpr double kDefaultA = 3.0;
inline constexpr std::uint64_t kPrimeCounterLimit = 1'000'000'000ULL;

// Throws DomainError unless eps > 0 and A >= 1.
HypothesisReport check_hypotheses(const TheoremParams& p, double eps, double A, const PrimeCounter& prime_counter,
                                  std::uint64_t counter_limit = kPrimeCounterLimit);

}  // namespace gsm
