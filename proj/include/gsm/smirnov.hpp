#pragma once

// Exact one-sided boundary-crossing probabilities for uniform order
// statistics.
//
// Q_m(u, v) is the probability that the order statistics xi_1 <= ... <= xi_m
// of m independent Uniform[0,1] draws satisfy xi_i >= (i - u) / v for every i.
// Equivalently, the empirical distribution function stays below the line
// (v t + u) / m on [0, 1].

#include <optional>
#include <span>
#include <vector>

#include "gsm/rational.hpp"

namespace gsm {

// Largest order handled by the exact (big-integer) algorithms.
inline constexpr int kExactMaxOrder = 200;

// In automatic mode the DP runs exactly only when the scaled integers stay
// below this many bits (m * bits(common denominator)).
inline constexpr long kAutoExactBitBudget = 16384;

enum class ArithmeticMode { automatic, exact_rational, floating };

enum class ResultMode { exact_rational, floating };

class BoundaryQuery {
public:
    // Throws DomainError unless m >= 1, u >= 0, v > 0.
    BoundaryQuery(int m, Rational u, Rational v);

    static BoundaryQuery from_double(int m, double u, double v);

    int m() const { return m_; }
    const Rational& u() const { return u_; }
    const Rational& v() const { return v_; }
    Rational w() const { return u_ + v_ - m_; }

    double u_double() const { return u_.get_d(); }
    double v_double() const { return v_.get_d(); }
    double w_double() const { return w().get_d(); }

private:
    int m_;
    Rational u_;
    Rational v_;
};

// Lower thresholds a_1 <= ... <= a_m, all in [0, 1].
class LowerThresholdProfile {
public:
    // Validating constructor: throws DomainError on an empty, non-monotone or
    // out-of-range sequence.
    explicit LowerThresholdProfile(std::vector<Rational> thresholds);

    // Clamps every entry into [0, 1] first, then validates monotonicity.
    static LowerThresholdProfile clamped(std::vector<Rational> raw);

    int m() const { return static_cast<int>(a_.size()); }
    std::span<const Rational> thresholds() const { return a_; }
    const Rational& operator[](int i) const { return a_[static_cast<std::size_t>(i)]; }

private:
    std::vector<Rational> a_;
};

struct ProbabilityResult {
    double value = 0.0;
    ResultMode mode = ResultMode::floating;
    double abs_error_bound = 0.0;   // 0 in exact mode
    std::optional<Rational> exact;  // set in exact mode
};

// a_i = clamp((i - u) / v, 0, 1).
LowerThresholdProfile lower_profile(const BoundaryQuery& q);

// b_i = clamp((u + v - m - 1 + i) / v, 0, 1), the thresholds of the
// equivalent event {xi_i <= b_i for all i}.
std::vector<Rational> upper_thresholds(const BoundaryQuery& q);

// Maps upper thresholds b to the lower profile a_j = 1 - b_{m+1-j} of the
// reflected sample 1 - U.
LowerThresholdProfile reflect_upper(std::span<const Rational> upper);

// Prob(xi_i >= a_i for all i), by dynamic programming over how many sample
// points fall below each threshold.
ProbabilityResult q_exact_general(const LowerThresholdProfile& profile,
                                  ArithmeticMode mode = ArithmeticMode::automatic);

ProbabilityResult q_exact(const BoundaryQuery& q, ArithmeticMode mode = ArithmeticMode::automatic);

// Prob(xi_i <= b_i for all i) from Steck's determinant, evaluated exactly
// through its Hessenberg recursion. Shares nothing with the DP.
// Throws CapacityError when m > kExactMaxOrder.
ProbabilityResult steck_upper(std::span<const Rational> upper);

ProbabilityResult q_steck(const BoundaryQuery& q);

// Q_m(u, v) through the upper-threshold form, reflected back to a lower
// profile and handed to q_exact_general.
ProbabilityResult q_reflect_upper(const BoundaryQuery& q,
                                  ArithmeticMode mode = ArithmeticMode::automatic);

}  // namespace gsm
