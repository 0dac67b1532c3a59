#include "gsm/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "gsm/errors.hpp"
#include "gsm/rational.hpp"

namespace gsm {

namespace {

constexpr long double kGuard = 1e-12L;

struct Kahan {
    long double sum = 0.0L;
    long double comp = 0.0L;
    void add(long double x) {
        const long double y = x - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

double ll(std::uint64_t p) { return std::log(std::log(static_cast<double>(p))); }

// Decides sum_{p in primes} 1/p <= 1 exactly.
bool reciprocal_sum_at_most_one(const std::vector<std::uint32_t>& primes, std::size_t begin, std::size_t end) {
    Rational s = 0;
    for (std::size_t i = begin; i < end; ++i) s += Rational(1, primes[i]);
    return s <= 1;
}

}  // namespace

LambdaTable build_lambda(int J, LambdaMode mode, const SieveConfig& cfg) {
    if (J < 1) throw DomainError("build_lambda needs J >= 1");
    if (cfg.capacity > kMaxCapacity) throw CapacityError("configured sieve capacity exceeds 2^32 - 1");

    std::vector<std::uint32_t> primes;
    std::uint64_t limit = 0;
    auto grow = [&](std::uint64_t want) {
        want = std::min(want, cfg.capacity);
        if (want <= limit) return false;
        primes = primes_up_to(want, cfg);
        limit = want;
        return true;
    };
    grow(1000);

    LambdaTable table;
    std::size_t next = 0;  // index of the first prime above lambda_{j-1}
    double previous_log2 = std::log(std::log(kLambdaZero));
    bool exhausted = false;

    for (int j = 1; j <= J; ++j) {
        // Mertens: the block spans about one unit of log2. Refuse early rather
        // than sieve the whole capacity for a block that cannot fit.
        if (!exhausted && std::exp(std::exp(previous_log2 + 0.5)) > static_cast<double>(cfg.capacity)) {
            exhausted = true;
        }
        LambdaBlock block;
        block.j = j;
        if (!exhausted) {
            Kahan sum;
            const std::size_t begin = next;
            for (;;) {
                if (next >= primes.size() && !grow(limit * 8)) {
                    exhausted = true;
                    break;
                }
                const std::uint32_t p = primes[next];
                const long double candidate = sum.sum + 1.0L / p;
                bool fits = candidate <= 1.0L;
                if (std::fabs(candidate - 1.0L) < kGuard) fits = reciprocal_sum_at_most_one(primes, begin, next + 1);
                if (!fits) break;
                sum.add(1.0L / p);
                ++next;
            }
            if (!exhausted) {
                block.exact = true;
                block.p_min = primes[begin];
                block.lambda = primes[next - 1];
                block.next_prime = primes[next];
                block.count = next - begin;
                block.reciprocal_sum = sum.sum;
                block.log2_lambda = ll(block.lambda);
                previous_log2 = block.log2_lambda;
                table.j_max_exact = j;
                table.blocks.push_back(block);
                continue;
            }
        }
        if (mode == LambdaMode::exact) {
            throw CapacityError("lambda_" + std::to_string(j) + " lies beyond the sieve capacity " +
                                std::to_string(cfg.capacity) + "; use the approximate mode");
        }
        block.exact = false;
        block.log2_lambda = previous_log2 + 1.0;
        block.reciprocal_sum = 1.0L;
        previous_log2 = block.log2_lambda;
        table.blocks.push_back(block);
    }
    table.measured_K = measure_K(table);
    return table;
}

double measure_K(const LambdaTable& table) {
    double k = 0.0;
    for (const auto& b : table.blocks) {
        if (!b.exact) continue;
        // log2 is monotone, so the extremes sit at the block ends.
        k = std::max({k, std::fabs(ll(b.p_min) - b.j), std::fabs(ll(b.lambda) - b.j)});
    }
    return k;
}

LambdaAudit audit_lambda(const LambdaTable& table, const SieveConfig& cfg) {
    LambdaAudit audit;
    std::uint64_t top = 0;
    for (const auto& b : table.blocks) {
        if (b.exact) top = std::max(top, b.next_prime);
    }
    if (top == 0) return audit;
    if (top > cfg.capacity) throw CapacityError("lambda audit beyond sieve capacity");
    std::vector<bool> composite(static_cast<std::size_t>(top + 1), false);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t i = 2; i <= top; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        primes.push_back(i);
        for (std::uint64_t k = i * i; k <= top; k += i) composite[static_cast<std::size_t>(k)] = true;
    }
    std::size_t at = 0;
    for (const auto& b : table.blocks) {
        if (!b.exact) break;
        if (at >= primes.size() || primes[at] != b.p_min) {
            audit.contiguous = false;
            audit.detail += "block " + std::to_string(b.j) + " does not start at the next prime; ";
            break;
        }
        long double s = 0.0L;
        std::uint64_t count = 0;
        while (at < primes.size() && primes[at] <= b.lambda) {
            s += 1.0L / static_cast<long double>(primes[at]);
            ++at;
            ++count;
        }
        if (count != b.count || at >= primes.size() || primes[at] != b.next_prime) {
            audit.contiguous = false;
            audit.detail += "block " + std::to_string(b.j) + " membership mismatch; ";
        }
        if (s > 1.0L + kGuard) {
            audit.sums_ok = false;
            audit.detail += "block " + std::to_string(b.j) + " sum exceeds 1; ";
        }
        if (at < primes.size() && s + 1.0L / static_cast<long double>(primes[at]) <= 1.0L - kGuard) {
            audit.maximal = false;
            audit.detail += "block " + std::to_string(b.j) + " not maximal; ";
        }
        if (std::fabs(ll(b.lambda) - b.j) > 2.0) {
            audit.mertens_ok = false;
            audit.detail += "block " + std::to_string(b.j) + " log2 lambda far from j; ";
        }
    }
    return audit;
}

long double prime_power_budget(std::uint64_t p, double gamma) {
    const long double r = std::pow(static_cast<long double>(p), -(1.0L - gamma));
    return r / (1.0L - r);
}

namespace {

int log2_window(std::uint64_t p) { return static_cast<int>(std::floor((ll(p) + 1.0) / 2.0)); }

}  // namespace

EPartition build_E(double Q, const SieveConfig& cfg) {
    if (!(Q >= std::exp(10.0))) throw DomainError("E partition needs Q >= e^10");
    if (!(Q <= static_cast<double>(cfg.capacity))) throw DomainError("E partition needs Q within the sieve capacity");
    EPartition part;
    part.Q = Q;
    part.gamma = 1.0 / std::log(Q);
    const auto primes = primes_up_to(static_cast<std::uint64_t>(std::floor(Q)), cfg);

    ESet current;
    auto close = [&] {
        if (current.count == 0) return;
        part.sets.push_back(current);
        current = ESet{};
    };
    for (std::uint32_t p : primes) {
        const long double b = prime_power_budget(p, part.gamma);
        if (b > 2.0L - kGuard) {
            throw InvariantViolation("prime " + std::to_string(p) + " alone exceeds the E-set budget");
        }
        const int window = log2_window(p);
        if (current.count > 0 && (window != current.window || current.budget + b > 2.0L - kGuard)) close();
        if (current.count == 0) {
            current.j = static_cast<int>(part.sets.size()) + 1;
            current.window = window;
            current.p_min = p;
        }
        current.p_max = p;
        ++current.count;
        current.budget += b;
    }
    close();
    for (const auto& s : part.sets) {
        part.measured_Kprime =
            std::max({part.measured_Kprime, std::fabs(ll(s.p_min) - 2.0 * s.j), std::fabs(ll(s.p_max) - 2.0 * s.j)});
    }
    return part;
}

EAudit audit_E(const EPartition& partition) {
    EAudit audit;
    const auto top = static_cast<std::uint64_t>(std::floor(partition.Q));
    std::vector<bool> composite(static_cast<std::size_t>(top + 1), false);
    std::size_t set = 0;
    std::uint64_t in_set = 0;
    long double budget = 0.0L;
    auto finish_set = [&] {
        const auto& s = partition.sets[set];
        if (in_set != s.count) {
            audit.partition_ok = false;
            audit.detail += "set " + std::to_string(s.j) + " count mismatch; ";
        }
        if (budget > 2.0L + kGuard) {
            audit.budgets_ok = false;
            audit.detail += "set " + std::to_string(s.j) + " budget exceeds 2; ";
        }
    };
    for (std::uint64_t p = 2; p <= top; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        for (std::uint64_t k = p * p; k <= top; k += p) composite[static_cast<std::size_t>(k)] = true;
        while (set < partition.sets.size() && p > partition.sets[set].p_max) {
            finish_set();
            ++set;
            in_set = 0;
            budget = 0.0L;
        }
        if (set >= partition.sets.size() || p < partition.sets[set].p_min) {
            audit.partition_ok = false;
            audit.detail += "prime " + std::to_string(p) + " in no set; ";
            continue;
        }
        const int j = partition.sets[set].j;
        ++in_set;
        // Summed term by term rather than in closed form.
        const long double base = std::pow(static_cast<long double>(p), -(1.0L - partition.gamma));
        for (long double term = base; term > 1e-30L; term *= base) budget += term;
        audit.kprime = std::max(audit.kprime, std::fabs(ll(p) - 2.0 * j));
    }
    if (set < partition.sets.size()) {
        finish_set();
        ++set;
    }
    if (set != partition.sets.size()) {
        audit.partition_ok = false;
        audit.detail += "sets beyond Q; ";
    }
    for (std::size_t i = 0; i < partition.sets.size(); ++i) {
        if (partition.sets[i].j != static_cast<int>(i) + 1 ||
            (i > 0 && partition.sets[i].p_min <= partition.sets[i - 1].p_max)) {
            audit.partition_ok = false;
            audit.detail += "sets overlap or are misnumbered; ";
        }
    }
    audit.window_ok = audit.kprime <= partition.measured_Kprime + 1e-12;
    audit.set_bound = 0.5 * std::log(std::log(partition.Q)) + audit.kprime;
    audit.count_ok = static_cast<double>(partition.sets.size()) <= audit.set_bound;
    return audit;
}

void write_lambda_csv(std::ostream& out, const LambdaTable& table) {
    out << "j,p_min,p_max,count,reciprocal_sum,exact,log2_p_max\n";
    out << std::setprecision(17);
    for (const auto& b : table.blocks) {
        out << b.j << ',';
        if (b.exact) {
            out << b.p_min << ',' << b.lambda << ',' << b.count << ',' << static_cast<double>(b.reciprocal_sum) << ",1,";
        } else {
            out << ",,,,0,";
        }
        out << b.log2_lambda << '\n';
    }
}

void write_e_csv(std::ostream& out, const EPartition& partition) {
    out << "j,p_min,p_max,count,budget_sum\n";
    out << std::setprecision(17);
    for (const auto& s : partition.sets) {
        out << s.j << ',' << s.p_min << ',' << s.p_max << ',' << s.count << ',' << static_cast<double>(s.budget)
            << '\n';
    }
}

}  // namespace gsm
