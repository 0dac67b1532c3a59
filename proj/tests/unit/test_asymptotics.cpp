#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "../common/oracles.hpp"
#include "gsm/asymptotics.hpp"
#include "gsm/errors.hpp"

using namespace gsm;

namespace {

// pi(y) by a direct sieve, for the hypothesis checks.
PrimeCounter sieve_counter(std::uint64_t limit) {
    auto table = std::make_shared<std::vector<std::uint64_t>>(limit + 1, 0);
    const auto prime = oracle::eratosthenes(limit);
    for (std::uint64_t y = 1; y <= limit; ++y) (*table)[y] = (*table)[y - 1] + (prime[y] ? 1 : 0);
    return [table](std::uint64_t y) { return (*table)[y]; };
}

}  // namespace

TEST_CASE("map_params examples") {
    const auto a = map_params_loglog(1.0, 1.0, 0.0, 1, CountMode::N);
    CHECK(a.u == 0.0);
    CHECK(a.v == 1.0);
    CHECK(a.w == 1.0);
    const auto b = map_params_loglog(2.0, 1.0, 1.0, 2, CountMode::N);
    CHECK(b.u == 1.0);
    CHECK(b.v == 2.0);
    CHECK(b.w == 2.0);
    const auto c = map_params_loglog(2.0, 1.0, 1.0, 2, CountMode::M);
    CHECK(c.u == 1.0);
    CHECK(c.v == 2.0);
    CHECK(c.w == 2.0);
    // x = e^e sits below the x >= 16 guard of map_params.
    CHECK_THROWS_AS(map_params(std::exp(std::exp(1.0)), 1.0, 0.0, 1, CountMode::N), DomainError);
    const auto d = map_params(std::exp(std::exp(2.0)), 1.0, 1.0, 2, CountMode::N);
    CHECK(d.v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("map_params rejects domain violations") {
    CHECK_THROWS_AS(map_params(15.0, 1.0, 0.0, 1, CountMode::N), DomainError);
    CHECK_THROWS_AS(map_params(100.0, 0.0, 0.0, 1, CountMode::N), DomainError);
    CHECK_THROWS_AS(map_params(100.0, 1.0, 0.0, 0, CountMode::M), DomainError);
}

TEST_CASE("w = u + v - (k - 1) in both modes") {
    for (double x : {16.0, 1e3, 1e6, 1e9, 1e30})
        for (double alpha : {0.5, 1.0, 2.5})
            for (double beta : {-1.0, 0.0, 0.7, 3.0})
                for (int k = 1; k <= 12; ++k)
                    for (CountMode mode : {CountMode::N, CountMode::M}) {
                        const auto p = map_params(x, alpha, beta, k, mode);
                        CHECK(std::fabs(p.u + p.v - (k - 1) - p.w) <= 1e-12 * (1 + std::fabs(p.u) + p.v));
                        if (mode == CountMode::M)
                            CHECK(p.w == doctest::Approx(beta / alpha + 1.0).epsilon(1e-12));
                    }
}

TEST_CASE("smirnov_limit") {
    CHECK(smirnov_limit(0.0) == 0.0);
    CHECK(smirnov_limit(1.0) == doctest::Approx(0.8646647).epsilon(1e-7));
    CHECK(smirnov_limit(50.0) == 1.0);
    double prev = -1.0;
    for (double l = 0.0; l < 5.0; l += 0.05) {
        const double s = smirnov_limit(l);
        CHECK(s >= prev);
        CHECK(s <= 1.0);
        prev = s;
    }
}

TEST_CASE("q_approx") {
    CHECK(q_approx(4, 1.0, 1.0) == doctest::Approx(0.39347).epsilon(1e-5));
    CHECK(q_approx(100, 10.0, 10.0) == doctest::Approx(0.86466).epsilon(1e-5));
    CHECK(q_approx(10, 1e-12, 1.0) < 1e-11);
    double prev = -1.0;
    for (double u = 0.1; u < 20.0; u += 0.1) {
        const double q = q_approx(30, u, 2.0);
        CHECK(q >= prev);
        CHECK(q < 1.0);
        prev = q;
    }
}

TEST_CASE("q_envelope") {
    CHECK(q_envelope(100, 5.0, 4.0).value == doctest::Approx(0.2));
    CHECK(q_envelope(10, 5.0, 4.0).value == 1.0);
    CHECK(q_envelope(1, 1.0, 1.0).value == 1.0);
    CHECK(q_envelope(1, 1.0, 1.0).asserted);
    CHECK_FALSE(q_envelope(10, 0.5, 4.0).asserted);
    CHECK_FALSE(q_envelope(10, 2.0, 0.9).asserted);
}

TEST_CASE("theorem_envelope") {
    TheoremParams n;
    n.mode = CountMode::N;
    n.u = 0.0;
    n.w = 2.0;
    n.k = 4;
    CHECK(theorem_envelope(n) == doctest::Approx(0.5));
    TheoremParams m;
    m.mode = CountMode::M;
    m.u = 1.0;
    m.w = 0.0;
    m.k = 3;
    CHECK(theorem_envelope(m) == doctest::Approx(1.0 / 3.0));
    n.k = 1;
    m.k = 1;
    m.u = 5.0;
    CHECK(theorem_envelope(n) == 1.0);
    CHECK(theorem_envelope(m) == 1.0);
}

TEST_CASE("check_hypotheses: exponential condition examples") {
    const auto counter = sieve_counter(1000);
    TheoremParams p = map_params_loglog(10.0, 1.0, 0.0, 8, CountMode::N);  // w = 0 + 10 - 7 = 3
    REQUIRE(p.w == doctest::Approx(3.0));
    auto h = check_hypotheses(p, 0.1, 3.0, counter, 1000);
    CHECK(h.exp1_holds);
    CHECK(h.exp1_lhs == doctest::Approx(std::exp(2.0) - std::exp(1.0)));
    p = map_params_loglog(10.0, 1.0, 0.0, 10, CountMode::N);  // w = 1
    h = check_hypotheses(p, 0.1, 3.0, counter, 1000);
    CHECK_FALSE(h.exp1_holds);
    CHECK(h.exp1_lhs == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK_FALSE(h.w_ge_1_plus_eps);
    CHECK_THROWS_AS(check_hypotheses(p, 0.0, 3.0, counter, 1000), DomainError);
    CHECK_THROWS_AS(check_hypotheses(p, 0.1, 0.5, counter, 1000), DomainError);
}

TEST_CASE("check_hypotheses: prime supply for the M_k bound") {
    const auto counter = sieve_counter(2'000'000);
    // alpha = 1, beta = 0, k = 1: exp exp 1 ~ 15.15 and pi(15) = 6 >= 1.
    auto p = map_params(1e6, 1.0, 0.0, 1, CountMode::M);
    auto h = check_hypotheses(p, 0.1, 3.0, counter, 2'000'000);
    CHECK(h.enough_primes == Tri::yes);
    // beta very negative: exp exp(1 - 5) < 2, no primes at all.
    p = map_params(1e6, 1.0, -5.0, 2, CountMode::M);
    h = check_hypotheses(p, 0.1, 3.0, counter, 2'000'000);
    CHECK(h.enough_primes == Tri::no);
    // Thresholds past the counter are settled by the p_j upper bound.
    p = map_params(1e6, 1.0, 2.0, 8, CountMode::M);
    h = check_hypotheses(p, 0.1, 3.0, counter, 2'000'000);
    CHECK(h.enough_primes == Tri::yes);
    CHECK(to_string(Tri::indeterminate) == "na");
}

TEST_CASE("check_hypotheses: flag conjunction per theorem") {
    const auto counter = sieve_counter(2'000'000);
    const auto p = map_params(1e8, 1.0, 1.0, 3, CountMode::N);
    const auto h = check_hypotheses(p, 0.1, 3.0, counter, 2'000'000);
    CHECK(h.beta_nonneg);
    CHECK(h.alpha_minus_beta_le_A);
    CHECK(h.k_in_range);
    CHECK(h.holds(CountMode::N) == (h.w_ge_1_plus_eps && h.exp1_holds));
    const auto neg = check_hypotheses(map_params(1e8, 1.0, -1.0, 3, CountMode::N), 0.1, 3.0, counter, 2'000'000);
    CHECK_FALSE(neg.beta_nonneg);
    CHECK_FALSE(neg.holds(CountMode::N));
}
