#pragma once

// Segmented factorization sieve and the counts built on it:
//   pi_k(x)          #{n <= x : omega(n) = k}
//   N_k(x; a, b)     ... with log2 p_j >= a j - b for every j   (lower)
//   M_k(x; a, b)     ... with log2 p_j <= a j + b for every j   (upper)
// and the two one-sided counts on omega(n, t) over t in [2, x].
// log2 y is log(log(y)).

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gsm {

inline constexpr std::uint64_t kDefaultCapacity = 1'000'000'000ULL;
inline constexpr std::uint64_t kMaxCapacity = 0xFFFFFFFFULL;
// 2*3*5*...*29 > 2^32, so omega(n) <= 9 below kMaxCapacity.
inline constexpr int kMaxOmega = 9;

struct SieveConfig {
    std::uint64_t capacity = kDefaultCapacity;
    std::uint32_t segment_width = 1u << 18;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::optional<std::filesystem::path> cache_dir;
};

struct FactorProfile {
    std::uint32_t n = 1;
    std::uint8_t k = 0;  // omega(n)
    std::array<std::uint8_t, kMaxOmega> exponents{};
    std::array<std::uint32_t, kMaxOmega> primes{};

    int omega() const { return k; }
    std::span<const std::uint32_t> prime_factors() const { return {primes.data(), k}; }
    std::span<const std::uint8_t> prime_exponents() const { return {exponents.data(), k}; }

    bool operator==(const FactorProfile& other) const;
};

// Factors every n in [lo, hi] of one window with the primes up to sqrt(hi_max).
class SegmentedFactorSieve {
public:
    explicit SegmentedFactorSieve(std::uint64_t hi_max);

    // out[n - lo] receives the profile of n, for hi - lo < 2^32.
    void factor_window(std::uint64_t lo, std::uint64_t hi, std::vector<FactorProfile>& out) const;

private:
    std::uint64_t hi_max_;
    std::vector<std::uint32_t> base_primes_;
    mutable std::vector<std::uint32_t> product_;
};

// Calls visitor once per n in [lo, hi], in increasing n. n = 1 yields the
// empty profile. Throws CapacityError past cfg.capacity and DomainError when
// lo == 0 or lo > hi.
void sieve_profiles(std::uint64_t lo, std::uint64_t hi, const std::function<void(const FactorProfile&)>& visitor,
                    const SieveConfig& cfg = {});

enum class Constraint { none, lower, upper };

std::string to_string(Constraint c);
Constraint parse_constraint(const std::string& s);

struct CountQuery {
    std::uint64_t x = 2;
    double alpha = 1.0;
    double beta = 0.0;
    Constraint constraint = Constraint::none;
};

struct CountTable {
    std::uint64_t x = 0;
    double alpha = 0.0;
    double beta = 0.0;
    Constraint constraint = Constraint::none;
    std::array<std::uint64_t, kMaxOmega + 1> counts{};  // index k; n = 1 sits at k = 0

    std::uint64_t total() const;
    std::uint64_t at(int k) const { return k >= 0 && k <= kMaxOmega ? counts[static_cast<std::size_t>(k)] : 0; }
};

CountTable pi_k_table(std::uint64_t x, const SieveConfig& cfg = {});

// Throws DomainError for x < 2, alpha <= 0 (constrained), non-finite beta.
CountTable count_constrained(const CountQuery& q, const SieveConfig& cfg = {});

enum class CorollarySide { upper, lower };

std::string to_string(CorollarySide s);
CorollarySide parse_side(const std::string& s);

// upper: #{n <= x : omega(n, t) <= max(0, log2 t + beta) for all t in [2, x]}
// lower: #{n <= x : omega(n, t) >= log2 t - beta     for all t in [2, x]}
// Evaluated per n by walking the jumps of omega(n, .), not through N_k / M_k.
std::uint64_t count_corollary(std::uint64_t x, double beta, CorollarySide side, const SieveConfig& cfg = {});

// One sieve pass, several criteria. Each result is a per-k table.
struct Criterion {
    enum class Kind { all, lower, upper, corollary_upper, corollary_lower };
    Kind kind = Kind::all;
    double alpha = 1.0;
    double beta = 0.0;
};

std::vector<std::array<std::uint64_t, kMaxOmega + 1>> count_batch(std::uint64_t x,
                                                                  std::span<const Criterion> criteria,
                                                                  const SieveConfig& cfg = {});

// Sign of log log p - t. When the two are within 1e-9, decides by comparing p
// with exp(exp(t)) in extended precision.
int compare_loglog(std::uint64_t p, double t);

// Smallest integer y >= 2 with log log y >= t (kNoCutoff if above 2^32).
std::uint64_t lower_cutoff(double t);
// Largest integer y >= 2 with log log y <= t (1 if none).
std::uint64_t upper_cutoff(double t);
inline constexpr std::uint64_t kNoCutoff = ~0ULL;

// Number of primes <= y. Throws CapacityError past cfg.capacity.
std::uint64_t prime_count(std::uint64_t y, const SieveConfig& cfg = {});

// All primes <= y, ascending. Throws CapacityError past cfg.capacity.
std::vector<std::uint32_t> primes_up_to(std::uint64_t y, const SieveConfig& cfg = {});

// Memoizing pi(y); small arguments are answered from a cached prime table.
class PrimeCountCache {
public:
    explicit PrimeCountCache(SieveConfig cfg = {});
    std::uint64_t operator()(std::uint64_t y);

private:
    SieveConfig cfg_;
    std::vector<std::uint32_t> small_;
    std::map<std::uint64_t, std::uint64_t> memo_;
    std::mutex mutex_;
};

// On-disk cache of per-segment count tables (see count_cache.cpp for layout).
struct SegmentCounts {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::array<std::uint64_t, kMaxOmega + 1> counts{};
};

struct CountCacheKey {
    std::uint64_t x_lo = 1;
    std::uint64_t x_hi = 0;
    double alpha = 0.0;
    double beta = 0.0;
    Constraint constraint = Constraint::none;
    std::uint32_t segment_width = 0;
};

inline constexpr std::uint32_t kCountCodeVersion = 1;

std::filesystem::path count_cache_file(const std::filesystem::path& dir, const CountCacheKey& key);
// nullopt on a missing, truncated or mismatching file.
std::optional<std::vector<SegmentCounts>> load_count_cache(const std::filesystem::path& dir, const CountCacheKey& key);
void store_count_cache(const std::filesystem::path& dir, const CountCacheKey& key,
                       std::span<const SegmentCounts> records);

}  // namespace gsm
