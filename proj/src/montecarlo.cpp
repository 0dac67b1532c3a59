#include "gsm/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "gsm/errors.hpp"
#include "gsm/parallel.hpp"

namespace gsm {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64(state);
    state ^= index * 0xD1B54A32D192ED03ULL;
    const std::uint64_t b = splitmix64(state);
    const std::uint64_t c = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> sample_order_stats(int m, Rng& rng) {
    if (m < 1) throw DomainError("sample_order_stats needs m >= 1");
    std::vector<double> xs(static_cast<std::size_t>(m));
    for (auto& x : xs) x = uniform01(rng);
    std::sort(xs.begin(), xs.end());
    return xs;
}

double edf_eval(std::span<const double> sorted_sample, double t) {
    const auto below = std::upper_bound(sorted_sample.begin(), sorted_sample.end(), t) - sorted_sample.begin();
    return static_cast<double>(below) / static_cast<double>(sorted_sample.size());
}

bool crosses_below(std::span<const double> sorted_sample, std::span<const double> lower) {
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        if (sorted_sample[i] < lower[i]) return false;
    }
    return true;
}

bool edf_below_line(std::span<const double> sorted_sample, double u, double v) {
    const double m = static_cast<double>(sorted_sample.size());
    if (u < 0.0) return false;  // F_m(0) = 0 must sit below u/m
    for (double t : sorted_sample) {
        if (m * edf_eval(sorted_sample, t) > v * t + u) return false;
    }
    return true;
}

McEstimate q_mc(const BoundaryQuery& q, const McConfig& cfg) {
    if (cfg.m != q.m()) throw DomainError("Monte Carlo config m does not match the query");
    if (cfg.samples == 0) throw DomainError("Monte Carlo needs at least one sample");
    if (cfg.shard_size == 0) throw DomainError("Monte Carlo shard size must be positive");

    const int m = q.m();
    const double u = q.u_double();
    const double v = q.v_double();
    std::vector<double> lower(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) lower[static_cast<std::size_t>(i - 1)] = std::clamp((i - u) / v, 0.0, 1.0);

    constexpr std::uint64_t kAuditStride = 100;
    const std::uint64_t shards = (cfg.samples + cfg.shard_size - 1) / cfg.shard_size;
    struct ShardResult {
        std::uint64_t hits = 0, audited = 0, mismatches = 0;
    };
    std::vector<ShardResult> results(shards);
    parallel_for(shards, cfg.threads, [&](std::size_t shard) {
        Rng rng = derive_stream(cfg.seed, shard);
        const std::uint64_t begin = shard * cfg.shard_size;
        const std::uint64_t end = std::min(cfg.samples, begin + cfg.shard_size);
        std::vector<double> xs(static_cast<std::size_t>(m));
        ShardResult r;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            for (auto& x : xs) x = uniform01(rng);
            std::sort(xs.begin(), xs.end());
            const bool hit = crosses_below(xs, lower);
            r.hits += hit ? 1 : 0;
            if (idx % kAuditStride == 0) {
                ++r.audited;
                if (edf_below_line(xs, u, v) != hit) ++r.mismatches;
            }
        }
        results[shard] = r;
    });

    McEstimate est;
    est.samples = cfg.samples;
    est.seed = cfg.seed;
    for (const auto& r : results) {
        est.hits += r.hits;
        est.audited += r.audited;
        est.audit_mismatches += r.mismatches;
    }
    const double n = static_cast<double>(cfg.samples);
    est.p_hat = static_cast<double>(est.hits) / n;
    est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / n);
    return est;
}

}  // namespace gsm
