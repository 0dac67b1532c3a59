#include "gsm/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "gsm/errors.hpp"

namespace gsm {

std::string to_string(CountMode mode) { return mode == CountMode::N ? "N" : "M"; }

std::string to_string(Tri t) {
    switch (t) {
        case Tri::no:
            return "0";
        case Tri::yes:
            return "1";
        case Tri::indeterminate:
            break;
    }
    return "na";
}

double loglog(double y) {
    if (!(y > 1.0)) throw DomainError("log log y needs y > 1");
    return std::log(std::log(y));
}

TheoremParams map_params_loglog(double log2x, double alpha, double beta, int k, CountMode mode) {
    if (!(log2x > 0.0)) throw DomainError("parameter map needs log log x > 0 (x > e)");
    if (!(alpha > 0.0)) throw DomainError("parameter map needs alpha > 0");
    if (k < 1) throw DomainError("parameter map needs k >= 1");
    TheoremParams p;
    p.x = std::exp(std::exp(log2x));
    p.alpha = alpha;
    p.beta = beta;
    p.k = k;
    p.mode = mode;
    p.log2x = log2x;
    p.v = log2x / alpha;
    p.u = mode == CountMode::N ? beta / alpha : k + (beta - log2x) / alpha;
    p.w = p.u + p.v - (k - 1);
    return p;
}

TheoremParams map_params(double x, double alpha, double beta, int k, CountMode mode) {
    if (!(x >= 16.0)) throw DomainError("parameter map needs x >= 16");
    TheoremParams p = map_params_loglog(loglog(x), alpha, beta, k, mode);
    p.x = x;
    return p;
}

double smirnov_limit(double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("Smirnov limit needs lambda >= 0");
    return -std::expm1(-2.0 * lambda * lambda);
}

double q_approx(int m, double u, double w) {
    if (m < 1) throw DomainError("q_approx needs m >= 1");
    if (u < 0.0 || w < 0.0) throw DomainError("q_approx needs u, w >= 0");
    return -std::expm1(-2.0 * u * w / m);
}

EnvelopeValue q_envelope(int m, double u, double w) {
    if (m < 1) throw DomainError("q_envelope needs m >= 1");
    EnvelopeValue e;
    e.value = std::min(1.0, u * w / m);
    e.asserted = u >= 1.0 && w >= 1.0;
    return e;
}

double theorem_envelope(const TheoremParams& p) {
    const double raw = p.mode == CountMode::N ? (p.u + 1.0) * p.w / p.k : p.u * (p.w + 1.0) / p.k;
    return std::min(1.0, raw);
}

bool HypothesisReport::holds(CountMode mode) const {
    if (mode == CountMode::N) {
        return k_in_range && beta_nonneg && alpha_minus_beta_le_A && w_ge_1_plus_eps && exp1_holds;
    }
    return k_in_range && u_ge_1 && w_ge_0 && enough_primes == Tri::yes;
}

namespace {

struct PrimeCheck {
    Tri status = Tri::yes;
    bool analytic = false;
};

// Known small primes settle "at least j primes <= y" whenever y >= p_j;
// larger thresholds go through the counter, and thresholds past its range
// fall back to p_j <= j (log j + log log j), valid for j >= 6.
PrimeCheck check_prime_supply(const TheoremParams& p, const PrimeCounter& counter, std::uint64_t limit) {
    constexpr std::uint64_t kProbe = 1000;
    PrimeCheck out;
    for (int j = 1; j <= p.k; ++j) {
        const double log_threshold = std::exp(p.alpha * j + p.beta);  // log of exp exp(alpha j + beta)
        const bool beyond = !(log_threshold < std::log(static_cast<double>(limit)));
        const std::uint64_t y =
            beyond ? limit : static_cast<std::uint64_t>(std::floor(std::exp(log_threshold)));
        if (counter(std::min(y, kProbe)) >= static_cast<std::uint64_t>(j)) continue;
        if (y > kProbe && counter(y) >= static_cast<std::uint64_t>(j)) continue;
        if (!beyond) return PrimeCheck{Tri::no, false};
        if (j >= 6) {
            const double jd = j;
            const double log_bound = std::log(jd * (std::log(jd) + std::log(std::log(jd))));
            if (log_bound < log_threshold) {
                out.analytic = true;
                continue;
            }
        }
        out.status = Tri::indeterminate;
    }
    return out;
}

}  // namespace

HypothesisReport check_hypotheses(const TheoremParams& p, double eps, double A, const PrimeCounter& prime_counter,
                                  std::uint64_t counter_limit) {
    if (!(eps > 0.0)) throw DomainError("hypothesis check needs eps > 0");
    if (!(A >= 1.0)) throw DomainError("hypothesis check needs A >= 1");
    HypothesisReport r;
    r.eps = eps;
    r.A = A;
    r.k_in_range = p.k >= 1 && p.k <= A * p.log2x;
    r.beta_nonneg = p.beta >= 0.0;
    r.alpha_minus_beta_le_A = p.alpha - p.beta <= A;
    r.w_ge_1_plus_eps = p.w >= 1.0 + eps;
    r.exp1_lhs = std::exp(p.alpha * (p.w - 1.0)) - std::exp(p.alpha * (p.w - 2.0));
    r.exp1_holds = r.exp1_lhs >= 1.0 + eps;
    r.u_ge_1 = p.u >= 1.0;
    r.w_ge_0 = p.w >= 0.0;
    const PrimeCheck primes = check_prime_supply(p, prime_counter, counter_limit);
    r.enough_primes = primes.status;
    r.enough_primes_analytic = primes.analytic;
    return r;
}

}  // namespace gsm
