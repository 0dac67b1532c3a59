#include <string>

#include "gsm/errors.hpp"
#include "gsm/smirnov.hpp"

namespace gsm {

// Steck (1971): for 0 <= b_1 <= ... <= b_m <= 1,
//   Prob(xi_i <= b_i for all i) = m! det[ b_i^(j-i+1) / (j-i+1)! ],
// an upper Hessenberg matrix with unit subdiagonal. Expanding along the last
// column gives d_k = sum_i (-1)^(k-i) M_{i,k} d_{i-1}. With b_i = B_i / D and
// e_k = k! D^k d_k this becomes the integer recursion
//   e_k = sum_{i=1..k} (-1)^(k-i) C(k, i-1) B_i^(k-i+1) e_{i-1},
// and the probability is e_m / D^m.
ProbabilityResult steck_upper(std::span<const Rational> upper) {
    const int m = static_cast<int>(upper.size());
    if (m < 1) throw DomainError("Steck determinant needs m >= 1");
    if (m > kExactMaxOrder) {
        throw CapacityError("Steck determinant limited to m <= " + std::to_string(kExactMaxOrder) + ", got " +
                            std::to_string(m));
    }
    BigInt denom = 1;
    for (int i = 0; i < m; ++i) {
        const Rational& b = upper[static_cast<std::size_t>(i)];
        if (b < 0 || b > 1) throw DomainError("upper threshold outside [0, 1]: " + to_string(b));
        if (i > 0 && b < upper[static_cast<std::size_t>(i - 1)]) {
            throw DomainError("upper thresholds must be nondecreasing");
        }
        mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), b.get_den_mpz_t());
    }
    std::vector<BigInt> scaled(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const Rational& b = upper[static_cast<std::size_t>(i)];
        scaled[static_cast<std::size_t>(i)] = b.get_num() * (denom / b.get_den());
    }

    std::vector<BigInt> e(static_cast<std::size_t>(m + 1));
    std::vector<BigInt> power(static_cast<std::size_t>(m + 1));
    e[0] = 1;
    BigInt binom;
    BigInt term;
    for (int k = 1; k <= m; ++k) {
        for (int i = 1; i < k; ++i) power[static_cast<std::size_t>(i)] *= scaled[static_cast<std::size_t>(i - 1)];
        power[static_cast<std::size_t>(k)] = scaled[static_cast<std::size_t>(k - 1)];
        BigInt sum = 0;
        for (int i = 1; i <= k; ++i) {
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(i - 1));
            term = binom * power[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i - 1)];
            if ((k - i) % 2 == 0) {
                sum += term;
            } else {
                sum -= term;
            }
        }
        e[static_cast<std::size_t>(k)] = std::move(sum);
    }
    BigInt full;
    mpz_pow_ui(full.get_mpz_t(), denom.get_mpz_t(), static_cast<unsigned long>(m));
    Rational value(e[static_cast<std::size_t>(m)], full);
    value.canonicalize();
    if (value < 0 || value > 1) {
        throw InvariantViolation("Steck determinant produced " + to_string(value) + " outside [0, 1]");
    }
    ProbabilityResult r;
    r.value = value.get_d();
    r.mode = ResultMode::exact_rational;
    r.exact = std::move(value);
    return r;
}

ProbabilityResult q_steck(const BoundaryQuery& q) {
    if (q.m() > kExactMaxOrder) {
        throw CapacityError("q_steck limited to m <= " + std::to_string(kExactMaxOrder));
    }
    return steck_upper(upper_thresholds(q));
}

}  // namespace gsm
