#include "gsm/prime_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gsm/errors.hpp"
#include "gsm/parallel.hpp"

namespace gsm {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::uint32_t> simple_primes(std::uint64_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(limit + 1), false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

// Odd-only segmented sieve of Eratosthenes; calls on_prime(p) in order.
template <typename OnPrime>
void sieve_primes(std::uint64_t y, OnPrime&& on_prime) {
    if (y < 2) return;
    on_prime(std::uint64_t{2});
    const std::vector<std::uint32_t> base = simple_primes(isqrt(y));
    constexpr std::uint64_t kOddsPerSegment = 1u << 18;
    std::vector<std::uint8_t> is_prime(kOddsPerSegment);
    for (std::uint64_t lo = 3; lo <= y; lo += 2 * kOddsPerSegment) {
        const std::uint64_t hi = std::min(y, lo + 2 * kOddsPerSegment - 1);
        std::fill(is_prime.begin(), is_prime.end(), std::uint8_t{1});
        for (std::uint32_t p : base) {
            if (p == 2) continue;
            const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
            if (pp > hi) break;
            std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
            if (start % 2 == 0) start += p;
            for (std::uint64_t j = start; j <= hi; j += 2 * static_cast<std::uint64_t>(p)) {
                is_prime[static_cast<std::size_t>((j - lo) / 2)] = 0;
            }
        }
        for (std::uint64_t n = lo; n <= hi; n += 2) {
            if (is_prime[static_cast<std::size_t>((n - lo) / 2)]) on_prime(n);
        }
    }
}

void check_capacity(std::uint64_t y, const SieveConfig& cfg, const char* what) {
    if (cfg.capacity > kMaxCapacity) {
        throw CapacityError("configured sieve capacity exceeds 2^32 - 1");
    }
    if (y > cfg.capacity) {
        throw CapacityError(std::string(what) + ": " + std::to_string(y) + " exceeds sieve capacity " +
                            std::to_string(cfg.capacity));
    }
}

}  // namespace

bool FactorProfile::operator==(const FactorProfile& other) const {
    if (n != other.n || k != other.k) return false;
    for (int i = 0; i < k; ++i) {
        if (primes[static_cast<std::size_t>(i)] != other.primes[static_cast<std::size_t>(i)] ||
            exponents[static_cast<std::size_t>(i)] != other.exponents[static_cast<std::size_t>(i)]) {
            return false;
        }
    }
    return true;
}

SegmentedFactorSieve::SegmentedFactorSieve(std::uint64_t hi_max)
    : hi_max_(hi_max), base_primes_(simple_primes(isqrt(hi_max))) {
    if (hi_max > kMaxCapacity) throw CapacityError("factor sieve limited to n < 2^32");
}

void SegmentedFactorSieve::factor_window(std::uint64_t lo, std::uint64_t hi, std::vector<FactorProfile>& out) const {
    thread_local std::vector<std::uint32_t> product;
    if (lo == 0 || lo > hi || hi > hi_max_) throw DomainError("factor window outside the sieve range");
    const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
    out.resize(width);
    product.assign(width, 1u);
    for (std::size_t i = 0; i < width; ++i) {
        out[i].n = static_cast<std::uint32_t>(lo + i);
        out[i].k = 0;
    }
    for (std::uint32_t p : base_primes_) {
        const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
        if (pp > hi) break;
        for (std::uint64_t n = (lo + p - 1) / p * p; n <= hi; n += p) {
            const std::size_t i = static_cast<std::size_t>(n - lo);
            FactorProfile& f = out[i];
            f.primes[f.k] = p;
            f.exponents[f.k] = 1;
            ++f.k;
            product[i] *= p;
        }
        // Higher powers bump the exponent of the slot just written for p.
        for (std::uint64_t q = pp; q <= hi; q *= p) {
            for (std::uint64_t n = (lo + q - 1) / q * q; n <= hi; n += q) {
                const std::size_t i = static_cast<std::size_t>(n - lo);
                ++out[i].exponents[out[i].k - 1u];
                product[i] *= p;
            }
        }
    }
    // What is left after removing primes <= sqrt(hi) is 1 or a single prime.
    for (std::size_t i = 0; i < width; ++i) {
        FactorProfile& f = out[i];
        if (product[i] != f.n) {
            f.primes[f.k] = f.n / product[i];
            f.exponents[f.k] = 1;
            ++f.k;
        }
    }
}

void sieve_profiles(std::uint64_t lo, std::uint64_t hi, const std::function<void(const FactorProfile&)>& visitor,
                    const SieveConfig& cfg) {
    if (lo == 0 || lo > hi) throw DomainError("sieve_profiles needs 1 <= lo <= hi");
    check_capacity(hi, cfg, "sieve_profiles");
    if (cfg.segment_width == 0) throw DomainError("segment width must be positive");
    const SegmentedFactorSieve sieve(hi);
    std::vector<FactorProfile> window;
    for (std::uint64_t start = lo; start <= hi;) {
        const std::uint64_t end = std::min(hi, start + cfg.segment_width - 1);
        sieve.factor_window(start, end, window);
        for (const auto& f : window) visitor(f);
        if (end == hi) break;
        start = end + 1;
    }
}

std::string to_string(Constraint c) {
    switch (c) {
        case Constraint::none:
            return "none";
        case Constraint::lower:
            return "lower";
        case Constraint::upper:
            return "upper";
    }
    return "none";
}

Constraint parse_constraint(const std::string& s) {
    if (s == "none") return Constraint::none;
    if (s == "lower") return Constraint::lower;
    if (s == "upper") return Constraint::upper;
    throw DomainError("unknown constraint '" + s + "' (expected lower|upper|none)");
}

std::string to_string(CorollarySide s) { return s == CorollarySide::upper ? "upper" : "lower"; }

CorollarySide parse_side(const std::string& s) {
    if (s == "upper") return CorollarySide::upper;
    if (s == "lower") return CorollarySide::lower;
    throw DomainError("unknown side '" + s + "' (expected upper|lower)");
}

std::uint64_t CountTable::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

namespace {

constexpr double kTieBand = 1e-9;

int compare_loglog_value(std::uint64_t p, double ll, double t) {
    if (std::fabs(ll - t) >= kTieBand) return ll < t ? -1 : 1;
    const long double threshold = std::exp(std::exp(static_cast<long double>(t)));
    const long double value = static_cast<long double>(p);
    if (value < threshold) return -1;
    if (value > threshold) return 1;
    return 0;
}

// log log y for every y < 2^16; larger arguments are computed on demand.
const std::vector<double>& small_loglog_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(1u << 16, 0.0);
        for (std::size_t y = 2; y < t.size(); ++y) t[y] = std::log(std::log(static_cast<double>(y)));
        return t;
    }();
    return table;
}

double loglog_of(std::uint32_t p) {
    const auto& table = small_loglog_table();
    return p < table.size() ? table[p] : std::log(std::log(static_cast<double>(p)));
}

}  // namespace

int compare_loglog(std::uint64_t p, double t) {
    if (p < 2) throw DomainError("compare_loglog needs p >= 2");
    return compare_loglog_value(p, std::log(std::log(static_cast<double>(p))), t);
}

std::uint64_t lower_cutoff(double t) {
    if (compare_loglog(2, t) >= 0) return 2;
    if (compare_loglog(kMaxCapacity, t) < 0) return kNoCutoff;
    std::uint64_t lo = 2, hi = kMaxCapacity;  // pred(lo) false, pred(hi) true
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (compare_loglog(mid, t) >= 0 ? hi : lo) = mid;
    }
    return hi;
}

std::uint64_t upper_cutoff(double t) {
    if (compare_loglog(2, t) > 0) return 1;
    if (compare_loglog(kMaxCapacity, t) <= 0) return kMaxCapacity;
    std::uint64_t lo = 2, hi = kMaxCapacity;  // pred(lo) true, pred(hi) false
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (compare_loglog(mid, t) <= 0 ? lo : hi) = mid;
    }
    return lo;
}

namespace {

using KTable = std::array<std::uint64_t, kMaxOmega + 1>;

class Evaluator {
public:
    Evaluator(const Criterion& c, std::uint64_t x) : kind_(c.kind), beta_(c.beta) {
        using Kind = Criterion::Kind;
        if (!std::isfinite(c.beta)) throw DomainError("beta must be finite");
        if ((kind_ == Kind::lower || kind_ == Kind::upper) && !(c.alpha > 0.0 && std::isfinite(c.alpha))) {
            throw DomainError("alpha must be positive and finite");
        }
        for (int j = 1; j <= kMaxOmega; ++j) {
            if (kind_ == Kind::lower) cut_[static_cast<std::size_t>(j)] = lower_cutoff(c.alpha * j - c.beta);
            if (kind_ == Kind::upper) cut_[static_cast<std::size_t>(j)] = upper_cutoff(c.alpha * j + c.beta);
        }
        endpoint_ = std::log(std::log(static_cast<double>(x))) - c.beta;
    }

    bool uses_loglog() const {
        return kind_ == Criterion::Kind::corollary_upper || kind_ == Criterion::Kind::corollary_lower;
    }

    bool accepts(const FactorProfile& f, std::span<const double> ll) const {
        using Kind = Criterion::Kind;
        switch (kind_) {
            case Kind::all:
                return true;
            case Kind::lower:
                for (int j = 1; j <= f.k; ++j) {
                    if (f.primes[static_cast<std::size_t>(j - 1)] < cut_[static_cast<std::size_t>(j)]) return false;
                }
                return true;
            case Kind::upper:
                for (int j = 1; j <= f.k; ++j) {
                    if (f.primes[static_cast<std::size_t>(j - 1)] > cut_[static_cast<std::size_t>(j)]) return false;
                }
                return true;
            case Kind::corollary_upper:
                // omega(n, t) only jumps at p_j, where it becomes j; the bound
                // max(0, log2 t + beta) is tightest there: j <= log2 p_j + beta.
                for (int j = 1; j <= f.k; ++j) {
                    const auto idx = static_cast<std::size_t>(j - 1);
                    if (compare_loglog_value(f.primes[idx], ll[idx], j - beta_) < 0) return false;
                }
                return true;
            case Kind::corollary_lower:
                // Just below p_j omega(n, t) = j - 1, so log2 p_j <= j - 1 + beta;
                // on [p_k, x] it is k, so k >= log2 x - beta.
                for (int j = 1; j <= f.k; ++j) {
                    const auto idx = static_cast<std::size_t>(j - 1);
                    if (compare_loglog_value(f.primes[idx], ll[idx], (j - 1) + beta_) > 0) return false;
                }
                return f.k >= endpoint_;
        }
        return false;
    }

private:
    Criterion::Kind kind_;
    double beta_;
    double endpoint_ = 0.0;
    std::array<std::uint64_t, kMaxOmega + 1> cut_{};
};

std::vector<std::vector<SegmentCounts>> batch_segments(std::uint64_t x, std::span<const Criterion> criteria,
                                                       const SieveConfig& cfg) {
    if (x < 1) throw DomainError("count limit x must be >= 1");
    check_capacity(x, cfg, "count");
    if (cfg.segment_width == 0) throw DomainError("segment width must be positive");
    std::vector<Evaluator> evaluators;
    bool need_loglog = false;
    for (const auto& c : criteria) {
        evaluators.emplace_back(c, std::max<std::uint64_t>(x, 2));
        need_loglog = need_loglog || evaluators.back().uses_loglog();
    }
    const SegmentedFactorSieve sieve(x);
    const std::uint64_t width = cfg.segment_width;
    const std::uint64_t segments = (x + width - 1) / width;
    std::vector<std::vector<SegmentCounts>> out(criteria.size(), std::vector<SegmentCounts>(segments));

    parallel_for(segments, cfg.threads, [&](std::size_t s) {
        thread_local std::vector<FactorProfile> window;
        const std::uint64_t lo = 1 + s * width;
        const std::uint64_t hi = std::min(x, lo + width - 1);
        sieve.factor_window(lo, hi, window);
        std::vector<KTable> tables(evaluators.size(), KTable{});
        std::array<double, kMaxOmega> ll{};
        for (const auto& f : window) {
            if (need_loglog) {
                for (int j = 0; j < f.k; ++j) ll[static_cast<std::size_t>(j)] = loglog_of(f.primes[static_cast<std::size_t>(j)]);
            }
            for (std::size_t e = 0; e < evaluators.size(); ++e) {
                if (evaluators[e].accepts(f, ll)) ++tables[e][f.k];
            }
        }
        for (std::size_t e = 0; e < evaluators.size(); ++e) {
            out[e][s] = SegmentCounts{lo, hi, tables[e]};
        }
    });
    return out;
}

KTable sum_segments(std::span<const SegmentCounts> records) {
    KTable total{};
    for (const auto& r : records) {
        for (std::size_t k = 0; k < total.size(); ++k) total[k] += r.counts[k];
    }
    return total;
}

}  // namespace

std::vector<KTable> count_batch(std::uint64_t x, std::span<const Criterion> criteria, const SieveConfig& cfg) {
    const auto segments = batch_segments(x, criteria, cfg);
    std::vector<KTable> out;
    out.reserve(segments.size());
    for (const auto& s : segments) out.push_back(sum_segments(s));
    return out;
}

namespace {

// Cached records must tile [1, x] exactly.
bool covers(std::span<const SegmentCounts> records, std::uint64_t x) {
    std::uint64_t next = 1;
    for (const auto& r : records) {
        if (r.lo != next || r.hi < r.lo) return false;
        next = r.hi + 1;
    }
    return next == x + 1;
}

}  // namespace

CountTable count_constrained(const CountQuery& q, const SieveConfig& cfg) {
    if (q.x < 2) throw DomainError("count_constrained needs x >= 2");
    if (!std::isfinite(q.beta)) throw DomainError("beta must be finite");
    if (q.constraint != Constraint::none && !(q.alpha > 0.0 && std::isfinite(q.alpha))) {
        throw DomainError("alpha must be positive and finite");
    }
    check_capacity(q.x, cfg, "count_constrained");

    CountTable table;
    table.x = q.x;
    table.alpha = q.alpha;
    table.beta = q.beta;
    table.constraint = q.constraint;

    CountCacheKey key;
    key.x_lo = 1;
    key.x_hi = q.x;
    key.alpha = q.constraint == Constraint::none ? 0.0 : q.alpha;
    key.beta = q.constraint == Constraint::none ? 0.0 : q.beta;
    key.constraint = q.constraint;
    key.segment_width = cfg.segment_width;
    if (cfg.cache_dir) {
        if (auto cached = load_count_cache(*cfg.cache_dir, key); cached && covers(*cached, q.x)) {
            table.counts = sum_segments(*cached);
            return table;
        }
    }

    Criterion c;
    c.kind = q.constraint == Constraint::none    ? Criterion::Kind::all
             : q.constraint == Constraint::lower ? Criterion::Kind::lower
                                                 : Criterion::Kind::upper;
    c.alpha = q.alpha;
    c.beta = q.beta;
    const auto segments = batch_segments(q.x, std::span<const Criterion>(&c, 1), cfg);
    table.counts = sum_segments(segments.front());
    if (cfg.cache_dir) store_count_cache(*cfg.cache_dir, key, segments.front());
    return table;
}

CountTable pi_k_table(std::uint64_t x, const SieveConfig& cfg) {
    CountQuery q;
    q.x = x;
    q.constraint = Constraint::none;
    return count_constrained(q, cfg);
}

std::uint64_t count_corollary(std::uint64_t x, double beta, CorollarySide side, const SieveConfig& cfg) {
    if (x < 2) throw DomainError("count_corollary needs x >= 2");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("count_corollary needs finite beta >= 0");
    Criterion c;
    c.kind = side == CorollarySide::upper ? Criterion::Kind::corollary_upper : Criterion::Kind::corollary_lower;
    c.beta = beta;
    const auto tables = count_batch(x, std::span<const Criterion>(&c, 1), cfg);
    return std::accumulate(tables.front().begin(), tables.front().end(), std::uint64_t{0});
}

std::uint64_t prime_count(std::uint64_t y, const SieveConfig& cfg) {
    check_capacity(y, cfg, "prime_count");
    std::uint64_t count = 0;
    sieve_primes(y, [&](std::uint64_t) { ++count; });
    return count;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t y, const SieveConfig& cfg) {
    check_capacity(y, cfg, "primes_up_to");
    std::vector<std::uint32_t> out;
    sieve_primes(y, [&](std::uint64_t p) { out.push_back(static_cast<std::uint32_t>(p)); });
    return out;
}

namespace {
constexpr std::uint64_t kSmallPrimeTable = 1'000'000;
}

PrimeCountCache::PrimeCountCache(SieveConfig cfg) : cfg_(std::move(cfg)) {
    small_ = primes_up_to(std::min(kSmallPrimeTable, cfg_.capacity), cfg_);
}

std::uint64_t PrimeCountCache::operator()(std::uint64_t y) {
    if (y <= kSmallPrimeTable && y <= cfg_.capacity) {
        return static_cast<std::uint64_t>(std::upper_bound(small_.begin(), small_.end(), y) - small_.begin());
    }
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(y); it != memo_.end()) return it->second;
    const std::uint64_t value = prime_count(y, cfg_);
    memo_.emplace(y, value);
    return value;
}

}  // namespace gsm
