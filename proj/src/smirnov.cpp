#include "gsm/smirnov.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "gsm/errors.hpp"

namespace gsm {

BoundaryQuery::BoundaryQuery(int m, Rational u, Rational v) : m_(m), u_(std::move(u)), v_(std::move(v)) {
    u_.canonicalize();
    v_.canonicalize();
    if (m_ < 1) throw DomainError("boundary query needs m >= 1, got " + std::to_string(m_));
    if (u_ < 0) throw DomainError("boundary query needs u >= 0, got " + to_string(u_));
    if (v_ <= 0) throw DomainError("boundary query needs v > 0, got " + to_string(v_));
}

BoundaryQuery BoundaryQuery::from_double(int m, double u, double v) {
    return BoundaryQuery(m, exact_rational(u), exact_rational(v));
}

LowerThresholdProfile::LowerThresholdProfile(std::vector<Rational> thresholds) : a_(std::move(thresholds)) {
    if (a_.empty()) throw DomainError("threshold profile must have m >= 1 entries");
    for (std::size_t i = 0; i < a_.size(); ++i) {
        a_[i].canonicalize();
        if (a_[i] < 0 || a_[i] > 1) {
            throw DomainError("threshold a_" + std::to_string(i + 1) + " = " + to_string(a_[i]) +
                              " lies outside [0, 1]");
        }
        if (i > 0 && a_[i] < a_[i - 1]) {
            throw DomainError("thresholds must be nondecreasing (a_" + std::to_string(i + 1) + " < a_" +
                              std::to_string(i) + ")");
        }
    }
}

LowerThresholdProfile LowerThresholdProfile::clamped(std::vector<Rational> raw) {
    for (auto& a : raw) a = clamp01(a);
    return LowerThresholdProfile(std::move(raw));
}

LowerThresholdProfile lower_profile(const BoundaryQuery& q) {
    std::vector<Rational> a;
    a.reserve(static_cast<std::size_t>(q.m()));
    for (int i = 1; i <= q.m(); ++i) a.push_back((Rational(i) - q.u()) / q.v());
    return LowerThresholdProfile::clamped(std::move(a));
}

std::vector<Rational> upper_thresholds(const BoundaryQuery& q) {
    std::vector<Rational> b;
    b.reserve(static_cast<std::size_t>(q.m()));
    const Rational shift = q.u() + q.v() - (q.m() + 1);
    for (int i = 1; i <= q.m(); ++i) b.push_back(clamp01((shift + i) / q.v()));
    return b;
}

LowerThresholdProfile reflect_upper(std::span<const Rational> upper) {
    std::vector<Rational> a(upper.size());
    for (std::size_t j = 0; j < upper.size(); ++j) a[j] = 1 - upper[upper.size() - 1 - j];
    return LowerThresholdProfile(std::move(a));
}

namespace {

BigInt common_denominator(std::span<const Rational> values) {
    BigInt d = 1;
    for (const auto& v : values) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
    return d;
}

ProbabilityResult exact_result(Rational value) {
    value.canonicalize();
    if (value < 0 || value > 1) {
        throw InvariantViolation("exact probability " + to_string(value) + " outside [0, 1]");
    }
    ProbabilityResult r;
    r.value = value.get_d();
    r.mode = ResultMode::exact_rational;
    r.abs_error_bound = 0.0;
    r.exact = std::move(value);
    return r;
}

// Counts are scaled by D^m so every quantity is an integer: with A_i = D a_i,
// the weight of moving from s' to s points below a_i is
// C(m - s', s - s') (A_i - A_{i-1})^(s - s'), and the m - s points left over
// all land in [a_m, 1] with weight (D - A_m)^(m - s).
ProbabilityResult dp_exact(const LowerThresholdProfile& profile) {
    const int m = profile.m();
    const BigInt denom = common_denominator(profile.thresholds());
    std::vector<BigInt> scaled(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        scaled[static_cast<std::size_t>(i)] = profile[i].get_num() * (denom / profile[i].get_den());
    }
    if (scaled.back() == denom) return exact_result(Rational(0));

    std::vector<std::vector<BigInt>> binom(static_cast<std::size_t>(m + 1));
    for (int n = 0; n <= m; ++n) {
        auto& row = binom[static_cast<std::size_t>(n)];
        row.resize(static_cast<std::size_t>(n + 1));
        row[0] = 1;
        row[static_cast<std::size_t>(n)] = 1;
        for (int c = 1; c < n; ++c) {
            row[static_cast<std::size_t>(c)] =
                binom[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(c - 1)] +
                binom[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(c)];
        }
    }

    std::vector<BigInt> f(1, BigInt(1));
    std::vector<BigInt> powers;
    BigInt previous = 0;
    BigInt term;
    for (int i = 1; i <= m; ++i) {
        const BigInt& current = scaled[static_cast<std::size_t>(i - 1)];
        BigInt delta = current - previous;
        previous = current;
        if (delta == 0) continue;

        powers.assign(static_cast<std::size_t>(i), BigInt(1));
        for (int c = 1; c < i; ++c) powers[static_cast<std::size_t>(c)] = powers[static_cast<std::size_t>(c - 1)] * delta;

        std::vector<BigInt> g(static_cast<std::size_t>(i), BigInt(0));
        for (int sp = 0; sp < static_cast<int>(f.size()); ++sp) {
            const BigInt& fs = f[static_cast<std::size_t>(sp)];
            if (fs == 0) continue;
            const auto& brow = binom[static_cast<std::size_t>(m - sp)];
            for (int c = 0; sp + c <= i - 1; ++c) {
                mpz_mul(term.get_mpz_t(), fs.get_mpz_t(), brow[static_cast<std::size_t>(c)].get_mpz_t());
                mpz_addmul(g[static_cast<std::size_t>(sp + c)].get_mpz_t(), term.get_mpz_t(),
                           powers[static_cast<std::size_t>(c)].get_mpz_t());
            }
        }
        f = std::move(g);
    }

    const BigInt tail = denom - scaled.back();
    BigInt numerator = 0;
    BigInt tail_power;
    for (int s = 0; s < static_cast<int>(f.size()); ++s) {
        mpz_pow_ui(tail_power.get_mpz_t(), tail.get_mpz_t(), static_cast<unsigned long>(m - s));
        numerator += f[static_cast<std::size_t>(s)] * tail_power;
    }
    BigInt full;
    mpz_pow_ui(full.get_mpz_t(), denom.get_mpz_t(), static_cast<unsigned long>(m));
    return exact_result(Rational(numerator, full));
}

struct Neumaier {
    long double sum = 0.0L;
    long double comp = 0.0L;
    void add(long double x) {
        const long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    long double value() const { return sum + comp; }
};

// Binomial pmf terms below this (as a bound on the remaining tail) are dropped;
// the dropped mass is added to the reported error bound.
constexpr long double kTailCutoff = 1e-24L;

// Normalised form: after step i, f[s] = Prob(exactly s points below a_i and
// every constraint up to i holds). Of the m - s' points still above a_{i-1},
// the number landing in [a_{i-1}, a_i) is Binomial(m - s', p_i) with
// p_i = (a_i - a_{i-1}) / (1 - a_{i-1}). All terms are nonnegative, so the
// recursion has no cancellation.
ProbabilityResult dp_float(const LowerThresholdProfile& profile) {
    const int m = profile.m();
    if (profile[m - 1] == 1) {
        ProbabilityResult r;
        r.value = 0.0;
        r.mode = ResultMode::floating;
        return r;
    }

    std::vector<long double> log_fact(static_cast<std::size_t>(m + 1), 0.0L);
    for (int n = 1; n <= m; ++n) {
        log_fact[static_cast<std::size_t>(n)] = log_fact[static_cast<std::size_t>(n - 1)] + std::log(static_cast<long double>(n));
    }

    constexpr long double eps = LDBL_EPSILON;
    long double max_log_magnitude = 0.0L;
    long double dropped = 0.0L;

    std::vector<long double> f(1, 1.0L);
    std::vector<Neumaier> acc;
    std::vector<long double> pmf(static_cast<std::size_t>(m + 1));
    Rational previous = 0;
    for (int i = 1; i <= m; ++i) {
        const Rational& current = profile[i - 1];
        if (current == previous) continue;
        const Rational p_exact = (current - previous) / (1 - previous);
        const long double p = to_long_double(p_exact);
        const long double q = to_long_double(1 - p_exact);
        previous = current;
        const long double log_p = std::log(p);
        const long double log_q = std::log(q);
        const long double odds = p / q;

        acc.assign(static_cast<std::size_t>(i), Neumaier{});
        for (int sp = 0; sp < static_cast<int>(f.size()); ++sp) {
            const long double fs = f[static_cast<std::size_t>(sp)];
            if (fs == 0.0L) continue;
            const int n = m - sp;
            const int cmax = std::min(i - 1 - sp, n);
            if (cmax < 0) continue;
            const int mode = std::min(static_cast<int>(std::floor((n + 1) * p)), n);
            const int c0 = std::min(mode, cmax);
            const long double log_term = log_fact[static_cast<std::size_t>(n)] -
                                         log_fact[static_cast<std::size_t>(c0)] -
                                         log_fact[static_cast<std::size_t>(n - c0)] + c0 * log_p +
                                         (n - c0) * log_q;
            max_log_magnitude = std::max({max_log_magnitude, std::fabs(log_fact[static_cast<std::size_t>(n)]),
                                          std::fabs(c0 * log_p), std::fabs((n - c0) * log_q)});
            const long double start = std::exp(log_term);
            acc[static_cast<std::size_t>(sp + c0)].add(fs * start);

            // Downward from c0: pmf(c-1)/pmf(c) = c / ((n-c+1) odds), shrinking as c falls.
            long double value = start;
            for (int c = c0; c > 0; --c) {
                const long double ratio = c / ((n - c + 1) * odds);
                value *= ratio;
                if (ratio < 1.0L && value / (1.0L - ratio) < kTailCutoff) {
                    dropped += fs * value / (1.0L - ratio);
                    break;
                }
                acc[static_cast<std::size_t>(sp + c - 1)].add(fs * value);
            }
            // Upward from c0 (only when c0 is the mode and below cmax).
            value = start;
            for (int c = c0; c < cmax; ++c) {
                const long double ratio = (n - c) * odds / (c + 1);
                value *= ratio;
                if (ratio < 1.0L && value / (1.0L - ratio) < kTailCutoff) {
                    dropped += fs * value / (1.0L - ratio);
                    break;
                }
                acc[static_cast<std::size_t>(sp + c + 1)].add(fs * value);
            }
        }
        f.assign(static_cast<std::size_t>(i), 0.0L);
        for (int s = 0; s < i; ++s) f[static_cast<std::size_t>(s)] = acc[static_cast<std::size_t>(s)].value();
    }

    Neumaier total;
    for (long double x : f) total.add(x);
    long double value = total.value();

    // Each step multiplies by pmf values carrying relative error at most
    // (|log terms| + 4m) eps; m steps compound additively to first order.
    const long double relative = m * (max_log_magnitude + 8.0L * m + 16.0L) * eps;
    ProbabilityResult r;
    r.mode = ResultMode::floating;
    r.value = static_cast<double>(std::clamp(value, 0.0L, 1.0L));
    r.abs_error_bound = static_cast<double>(value * relative + dropped) + 2.0 * DBL_EPSILON * r.value +
                        std::numeric_limits<double>::denorm_min();
    return r;
}

bool use_exact(const LowerThresholdProfile& profile, ArithmeticMode mode) {
    switch (mode) {
        case ArithmeticMode::exact_rational:
            return true;
        case ArithmeticMode::floating:
            return false;
        case ArithmeticMode::automatic:
            break;
    }
    if (profile.m() > kExactMaxOrder) return false;
    const BigInt denom = common_denominator(profile.thresholds());
    const long bits = static_cast<long>(mpz_sizeinbase(denom.get_mpz_t(), 2));
    return bits * profile.m() <= kAutoExactBitBudget;
}

}  // namespace

ProbabilityResult q_exact_general(const LowerThresholdProfile& profile, ArithmeticMode mode) {
    return use_exact(profile, mode) ? dp_exact(profile) : dp_float(profile);
}

ProbabilityResult q_exact(const BoundaryQuery& q, ArithmeticMode mode) {
    if (q.w() <= 0) return exact_result(Rational(0));
    if (q.u() >= q.m()) return exact_result(Rational(1));
    return q_exact_general(lower_profile(q), mode);
}

ProbabilityResult q_reflect_upper(const BoundaryQuery& q, ArithmeticMode mode) {
    const auto upper = upper_thresholds(q);
    return q_exact_general(reflect_upper(upper), mode);
}

}  // namespace gsm
