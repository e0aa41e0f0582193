#include "sqfree/constructions.hpp"
#include "sqfree/property_checks.hpp"

#include "translate_checker.hpp"

#include <algorithm>
#include <cmath>

namespace sqfree {

std::string to_string(Certification c) {
    return c == Certification::Full ? "FULL" : "PI_CERTIFIED";
}

std::string to_string(QStrategy s) {
    switch (s) {
        case QStrategy::PlainScan: return "plain";
        case QStrategy::HalfInterval: return "half";
        case QStrategy::Crt: return "crt";
    }
    return "?";
}

QStrategy parse_q_strategy(const std::string& token) {
    if (token == "plain") return QStrategy::PlainScan;
    if (token == "half") return QStrategy::HalfInterval;
    if (token == "crt") return QStrategy::Crt;
    throw ArgumentError("unknown strategy '" + token + "' (expected plain, half or crt)");
}

std::string to_string(IntervalMode m) { return m == IntervalMode::Half ? "half" : "forward"; }

IntervalMode parse_interval_mode(const std::string& token) {
    if (token == "half") return IntervalMode::Half;
    if (token == "forward") return IntervalMode::Forward;
    throw ArgumentError("unknown interval mode '" + token + "' (expected half or forward)");
}

std::uint64_t full_prime_cutoff(const FiniteSet& set, std::uint64_t hi, unsigned k) {
    const BigInt top = BigInt(hi) + (set.empty() ? BigInt(0) : set.max());
    const BigInt root = integer_root(top, k);
    if (!fits_u64(root) || root > kDefaultPrimeLimitBudget) {
        throw ResourceError("full certification needs primes up to " + root.str() +
                            "; supply an explicit prime cutoff");
    }
    return std::max<std::uint64_t>(to_u64(root), 1);
}

WitnessReport certify_witness(const FiniteSet& set, const BigInt& n, unsigned k,
                              std::uint64_t prime_cutoff, const PrimeTable& table) {
    if (!table.covers(prime_cutoff)) {
        throw CoverageError("prime table does not reach the cutoff " + std::to_string(prime_cutoff));
    }
    const auto primes = detail::primes_upto(table, prime_cutoff);
    WitnessReport report;
    report.witness = n;
    report.prime_cutoff = prime_cutoff;
    report.power = k;
    report.trace.reserve(set.size());
    for (const auto& a : set) {
        TraceEntry entry{a, n + a, smallest_power_divisor_among(n + a, k, primes)};
        report.trace.push_back(std::move(entry));
    }
    const BigInt top = n + (set.empty() ? BigInt(0) : set.max());
    // Unchecked primes are >= cutoff + 1; they are irrelevant once (cutoff + 1)^k > n + max A.
    BigInt next_power = 1;
    for (unsigned i = 0; i < k; ++i) next_power *= (prime_cutoff + 1);
    report.certification = next_power > top ? Certification::Full : Certification::PiCertified;
    return report;
}

std::optional<WitnessReport> find_translate_witness(const FiniteSet& set, std::uint64_t lo,
                                                    std::uint64_t hi, unsigned k,
                                                    std::optional<std::uint64_t> prime_cutoff) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (lo < 1) throw ArgumentError("witness interval must start at 1 or later");
    if (lo > hi) return std::nullopt;
    const std::uint64_t cutoff = prime_cutoff ? *prime_cutoff : full_prime_cutoff(set, hi, k);
    const PrimeTable table = build_prime_table(cutoff);
    const auto primes = detail::primes_upto(table, cutoff);
    detail::TranslateChecker checker(set.elements(), primes, k);

    std::vector<unsigned char> flags;
    for (std::uint64_t block_lo = lo;; block_lo += kSegmentLength) {
        const std::uint64_t len = std::min(kSegmentLength, hi - block_lo + 1);
        flags.assign(len, 1);
        checker.sieve(block_lo, flags);
        auto it = std::find(flags.begin(), flags.end(), 1);
        if (it != flags.end()) {
            const std::uint64_t n = block_lo + static_cast<std::uint64_t>(it - flags.begin());
            return certify_witness(set, BigInt(n), k, cutoff, table);
        }
        if (hi - block_lo + 1 <= kSegmentLength) break;
    }
    return std::nullopt;
}

std::optional<WitnessReport> check_Q_prefix(const FiniteSet& terms, std::size_t j,
                                            const QPrefixOptions& options) {
    const unsigned k = options.power;
    if (j < 2) throw ArgumentError("check_Q_prefix needs j >= 2");
    if (terms.size() < j) throw ArgumentError("fewer than j terms supplied");
    const FiniteSet prefix = terms.prefix(j - 1);
    const BigInt& previous = terms[j - 2];
    const BigInt& current = terms[j - 1];

    const std::uint64_t bound = std::max<std::uint64_t>(integer_root(std::uint64_t(j - 1), k), 2);
    const auto admissible = admissibility_certificate(prefix, k, bound);
    if (auto* blocked = std::get_if<NotAdmissible>(&admissible)) {
        throw NotAdmissibleError(blocked->prime);
    }
    if (!fits_u64(current)) {
        throw ResourceError("a_j = " + current.str() + " exceeds the 64-bit scan range");
    }
    const std::uint64_t aj = to_u64(current);

    switch (options.strategy) {
        case QStrategy::PlainScan: {
            const std::uint64_t lo = to_u64(previous) + 1;
            if (aj == 0 || lo > aj - 1) return std::nullopt;
            return find_translate_witness(prefix, lo, aj - 1, k, options.prime_cutoff);
        }
        case QStrategy::HalfInterval:
            return find_translate_witness(prefix, std::max<std::uint64_t>((aj + 1) / 2, 1), aj, k,
                                          options.prime_cutoff);
        case QStrategy::Crt: {
            SuffSearchConfig cfg;
            cfg.theta = options.theta;
            cfg.mode = IntervalMode::Half;
            cfg.prime_cutoff = options.prime_cutoff;
            cfg.power = k;
            return suff_witness_search(prefix, aj, cfg).witness;
        }
    }
    return std::nullopt;
}

std::optional<WitnessReport> check_Q_prefix(SequenceTag tag, std::size_t j,
                                            const QPrefixOptions& options) {
    return check_Q_prefix(named_sequence_prefix(tag, j), j, options);
}

SuffSearchResult suff_witness_search(const FiniteSet& set, std::uint64_t x,
                                     const SuffSearchConfig& config) {
    const unsigned k = config.power;
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (!(config.theta > 0.0 && config.theta < 0.25)) {
        throw ArgumentError("theta must lie in (0, 1/4)");
    }
    if (x < 1) throw ArgumentError("x must be at least 1");
    const FiniteSet constraints = set.at_most(BigInt(x));

    // W = prod_{p <= theta ln x} p^k and b from the avoided classes.
    const auto small_bound = static_cast<std::uint64_t>(std::floor(config.theta * std::log(double(x))));
    const PrimeTable small = build_prime_table(small_bound);
    std::vector<ResidueClass> classes;
    for (std::uint64_t p : small) {
        const std::uint64_t pk = *checked_pow(p, k);
        auto b = smallest_avoided_residue(constraints, pk);
        if (!b) {
            throw ArgumentError("no avoidance certificate: the set fills every class modulo " +
                                std::to_string(p) + "^" + std::to_string(k));
        }
        classes.emplace_back(BigInt(*b), BigInt(pk));
    }
    SuffSearchResult result;
    if (!classes.empty()) {
        const ResidueClass b = crt_combine(classes);
        result.modulus = b.modulus;
        result.residue = (b.modulus - b.residue) % b.modulus;
    }
    if (!fits_u64(result.modulus)) throw ResourceError("modulus W exceeds 64 bits");
    const std::uint64_t W = to_u64(result.modulus);
    const std::uint64_t residue = to_u64(result.residue);

    std::uint64_t lo = 0, hi = 0;
    if (config.mode == IntervalMode::Half) {
        lo = std::max<std::uint64_t>((x + 1) / 2, 1);
        hi = x;
    } else {
        const double width = std::pow(double(x), 10.0 / 11.0);
        lo = x + 1;
        hi = x + static_cast<std::uint64_t>(std::ceil(width)) - 1;
    }
    result.interval_lo = lo;
    result.interval_hi = hi;
    if (lo > hi) return result;

    const std::uint64_t first = lo + (residue + W - lo % W) % W;
    if (first > hi) return result;
    const std::uint64_t count = (hi - first) / W + 1;

    const std::uint64_t cutoff =
        config.prime_cutoff ? *config.prime_cutoff : full_prime_cutoff(constraints, hi, k);
    const PrimeTable table = build_prime_table(cutoff);
    detail::TranslateChecker checker(constraints.elements(), detail::primes_upto(table, cutoff), k);

    std::uint64_t start = 0;
    if (config.order == ScanOrder::SeededRandom) {
        start = static_cast<std::uint64_t>(keyed_uniform(config.seed, x) * double(count)) % count;
    }
    const std::uint64_t budget = std::min(count, config.max_candidates);
    for (std::uint64_t t = 0; t < budget; ++t) {
        const std::uint64_t n = first + ((start + t) % count) * W;
        ++result.candidates_examined;
        if (!checker.blocking(n)) {
            result.witness = certify_witness(constraints, BigInt(n), k, cutoff, table);
            break;
        }
    }
    return result;
}

}  // namespace sqfree
