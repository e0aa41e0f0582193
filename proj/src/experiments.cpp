#include "sqfree/experiments.hpp"

#include "sqfree/large_sieve.hpp"
#include "sqfree/sieve_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace sqfree {

namespace {

// i-th k-free number (1-based) for every i in [1, count].
std::vector<std::uint64_t> first_kfree(std::uint64_t count, unsigned k) {
    std::vector<std::uint64_t> out;
    std::uint64_t span = std::max<std::uint64_t>(2 * count + 16, 64);
    while (out.size() < count) {
        out.clear();
        const PrimeTable table = build_prime_table(integer_root(span, k));
        const KFreeWindow window = kfree_window(1, span, k, table);
        for (std::uint64_t i = 0; i < span && out.size() < count; ++i) {
            if (window.flag(i)) out.push_back(i + 1);
        }
        span *= 2;
    }
    return out;
}

}  // namespace

CrosscheckReport crosscheck(const BFile& bfile, const SequenceManifest& manifest,
                            const CrosscheckOptions& options) {
    const ManifestRule& rule = manifest.rule(bfile.id);
    const unsigned k = options.power;
    CrosscheckReport report;
    report.id = bfile.id;

    std::vector<std::pair<std::int64_t, std::uint64_t>> todo;  // (index, argument m)
    for (const auto& [index, value] : bfile.entries) {
        if (options.lo && index < *options.lo) continue;
        if (options.hi && index > *options.hi) continue;
        if (index < rule.first || index + rule.shift < 0) {
            ++report.skipped;
            continue;
        }
        todo.emplace_back(index, static_cast<std::uint64_t>(index + rule.shift));
    }
    if (todo.empty()) return report;
    std::uint64_t top = 0;
    for (const auto& item : todo) top = std::max(top, item.second);

    std::vector<std::uint64_t> counts, nth;
    if (rule.quantity == Quantity::SfCount) {
        counts = power_free_prefix_counts(top, k, build_prime_table(integer_root(top, k)));
    } else if (rule.quantity == Quantity::SfNth) {
        nth = first_kfree(top, k);
    }

    for (const auto& [index, m] : todo) {
        const BigInt& expected = bfile.entries.at(index);
        BigInt computed;
        bool resolved = true;
        switch (rule.quantity) {
            case Quantity::SfCount: computed = counts[m]; break;
            case Quantity::SfNth:
                if (m == 0) throw ArgumentError("the 0-th k-free number is undefined");
                computed = nth[m - 1];
                break;
            case Quantity::NamedTerm: computed = named_sequence_term(*rule.tag, m); break;
            case Quantity::AOfX: {
                if (m == 0) throw ArgumentError("A(0) is undefined");
                const auto r = admissible_max_exact(m, k, options.a_budget);
                computed = r.value;
                resolved = r.status == MaxStatus::Exact;
                break;
            }
        }
        ++report.checked;
        if (computed == expected) {
            ++report.matches;
        } else if (!resolved && computed < expected) {
            ++report.unresolved;
        } else {
            report.mismatches.push_back({index, expected, computed});
        }
    }
    return report;
}

std::vector<ShiftRow> figure_shift_data(std::uint64_t x_max, unsigned k, Seconds time_budget) {
    if (x_max < 1) throw ArgumentError("x_max must be at least 1");
    const auto counts = power_free_prefix_counts(x_max, k, build_prime_table(integer_root(x_max, k)));
    std::vector<ShiftRow> rows;
    rows.reserve(x_max);
    for (std::uint64_t x = 1; x <= x_max; ++x) {
        const auto a = admissible_max_exact(x, k, time_budget);
        const double main = density_main_term(x, k);
        ShiftRow row;
        row.x = x;
        row.a_value = a.value;
        row.q_value = counts[x];
        row.a_minus_main = double(a.value) - main;
        row.q_minus_main = double(counts[x]) - main;
        row.status = a.status;
        rows.push_back(row);
    }
    return rows;
}

std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

std::string format_shift_csv(const std::vector<ShiftRow>& rows) {
    std::string out = "x,a_minus_main,q_minus_main,status\n";
    for (const auto& row : rows) {
        out += std::to_string(row.x) + "," + format_real(row.a_minus_main) + "," +
               format_real(row.q_minus_main) + "," + to_string(row.status) + "\n";
    }
    return out;
}

AppendixSummary run_appendix_trials(std::uint64_t trials, std::uint64_t seed,
                                    const std::vector<std::uint64_t>& primes, unsigned k) {
    if (primes.empty()) throw ArgumentError("no primes to draw from");
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::uint64_t n) { return rng() % n; };  // n is tiny here
    auto real = [&] { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };

    AppendixSummary summary;
    summary.smallest_margin = INFINITY;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t p = primes[uniform(primes.size())];
        const std::uint64_t m = *checked_pow(p, k);
        const std::uint64_t omega = 1 + uniform(m - 1);
        std::vector<std::uint64_t> classes(m);
        std::iota(classes.begin(), classes.end(), 0);
        std::shuffle(classes.begin(), classes.end(), rng);
        classes.resize(omega);
        std::vector<bool> removed(m, false);
        for (std::uint64_t r : classes) removed[r] = true;

        const std::int64_t start = static_cast<std::int64_t>(uniform(4 * m)) - static_cast<std::int64_t>(2 * m);
        const std::uint64_t length = 1 + uniform(3 * m);
        std::vector<std::complex<double>> coefficients(length);
        for (std::uint64_t i = 0; i < length; ++i) {
            const std::int64_t n = start + static_cast<std::int64_t>(i);
            const std::uint64_t r = static_cast<std::uint64_t>(((n % std::int64_t(m)) + std::int64_t(m)) % std::int64_t(m));
            if (!removed[r] && uniform(4) != 0) coefficients[i] = {real(), real()};
        }
        const SqSieveCheck check = verify_sqsieve_inequality(p, k, classes, start, coefficients);
        ++summary.trials;
        summary.holds += check.holds;
        summary.plancherel_ok += check.plancherel_ok;
        const double rel = std::abs(check.plancherel_sum - check.plancherel_expected) /
                           std::max(1.0, check.plancherel_expected);
        summary.worst_plancherel_error = std::max(summary.worst_plancherel_error, rel);
        summary.smallest_margin =
            std::min(summary.smallest_margin, (check.lhs - check.rhs) / std::max(1.0, check.rhs));
    }
    return summary;
}

}  // namespace sqfree
