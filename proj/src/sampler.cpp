#include "sqfree/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace sqfree {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

KFreeWindow sample_window(const SamplerConfig& config) {
    if (config.x_max < 3) throw ArgumentError("x_max must be at least 3");
    if (config.power < 2) throw ArgumentError("power k must be at least 2");
    const PrimeTable table = build_prime_table(integer_root(config.x_max, config.power));
    return kfree_window(3, config.x_max - 2, config.power, table);
}

}  // namespace

double sampler_probability(std::uint64_t n, double C) {
    if (n < 3) throw ArgumentError("sampling probability is defined for n >= 3");
    const double ln = std::log(double(n));
    return std::min(C * ln * std::log(ln) / double(n), 1.0);
}

double keyed_uniform(std::uint64_t seed, std::uint64_t n) {
    // Two rounds so that nearby (seed, n) pairs decorrelate.
    const std::uint64_t h = mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (n * 0x9e3779b97f4a7c15ULL));
    return double(h >> 11) * 0x1.0p-53;
}

FiniteSet sample_counterexample(const SamplerConfig& config) {
    const KFreeWindow window = sample_window(config);
    std::vector<std::uint64_t> kept;
    for (std::uint64_t i = 0; i < window.length(); ++i) {
        if (!window.flag(i)) continue;
        const std::uint64_t n = window.start() + i;
        if (keyed_uniform(config.seed, n) < sampler_probability(n, config.C)) kept.push_back(n);
    }
    return FiniteSet::from_u64(kept);
}

double expected_sample_size(const SamplerConfig& config) {
    const KFreeWindow window = sample_window(config);
    double total = 0.0;
    for (std::uint64_t i = 0; i < window.length(); ++i) {
        if (window.flag(i)) total += sampler_probability(window.start() + i, config.C);
    }
    return total;
}

std::vector<OccupancyRow> occupancy_probe(const FiniteSet& set, std::uint64_t x, unsigned k) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    std::vector<OccupancyRow> rows;
    if (x < 2) return rows;
    const auto bound = static_cast<std::uint64_t>(std::floor(std::log(double(x))));
    const FiniteSet members = set.at_most(BigInt(x));
    for (std::uint64_t p : build_prime_table(bound)) {
        const auto pk = checked_pow(p, k);
        if (!pk) break;
        std::vector<bool> occupied(*pk, false);
        for (const auto& a : members) occupied[mod_u64(a, *pk)] = true;
        OccupancyRow row{p, *pk, {}};
        for (std::uint64_t r = 1; r < *pk; ++r) {
            if (!occupied[r]) row.unoccupied_nonzero.push_back(r);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace sqfree
