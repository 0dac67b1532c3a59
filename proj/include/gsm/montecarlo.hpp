#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gsm/smirnov.hpp"

namespace gsm {

using Rng = std::mt19937_64;

// Stream for shard `index` of a run seeded with `seed`. SplitMix64 finalizer
// over (seed, index); distinct shards get unrelated states.
Rng derive_stream(std::uint64_t seed, std::uint64_t index);

// Uniform on [0, 1) with 53 random bits; independent of the standard
// library's distribution implementations.
double uniform01(Rng& rng);

struct McConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
    int m = 1;
    unsigned threads = 0;                 // 0 = hardware concurrency
    std::uint64_t shard_size = 1u << 16;  // fixed: results never depend on threads
};

struct McEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;  // sqrt(p_hat (1 - p_hat) / N)
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t hits = 0;
    std::uint64_t audited = 0;           // samples re-checked through the EDF form
    std::uint64_t audit_mismatches = 0;  // must be 0
};

// Sorted m uniforms.
std::vector<double> sample_order_stats(int m, Rng& rng);

// (number of entries <= t) / m for a sorted sample.
double edf_eval(std::span<const double> sorted_sample, double t);

// Order-statistic form: xi_i >= a_i for all i.
bool crosses_below(std::span<const double> sorted_sample, std::span<const double> lower);

// EDF form: F_m(t) <= (v t + u) / m for all t, checked at the jump points.
bool edf_below_line(std::span<const double> sorted_sample, double u, double v);

// Fraction of cfg.samples samples with xi_i >= (i - u)/v for all i. Every
// 100th sample is re-evaluated by the EDF form. Throws DomainError if
// cfg.m != q.m() or cfg.samples == 0.
McEstimate q_mc(const BoundaryQuery& q, const McConfig& cfg);

}  // namespace gsm
