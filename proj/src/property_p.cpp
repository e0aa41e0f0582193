#include "sqfree/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace sqfree {

GrowthFunction growth_identity() {
    return {"identity", [](std::uint64_t j) { return j; }};
}

GrowthFunction growth_linear(std::uint64_t c) {
    return {"linear:" + std::to_string(c), [c](std::uint64_t j) { return c * j; }};
}

GrowthFunction growth_j_log_j() {
    return {"jlogj", [](std::uint64_t j) -> std::uint64_t {
                if (j <= 1) return 1;
                return j * static_cast<std::uint64_t>(std::ceil(std::log(double(j))));
            }};
}

GrowthFunction growth_constant(std::uint64_t c) {
    return {"const:" + std::to_string(c), [c](std::uint64_t) { return c; }};
}

GrowthFunction parse_growth(const std::string& token) {
    auto value_after_colon = [&](const std::string& prefix) -> std::uint64_t {
        const std::string rest = token.substr(prefix.size());
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != rest.size()) throw ArgumentError("bad growth token '" + token + "'");
        return v;
    };
    if (token == "identity") return growth_identity();
    if (token == "jlogj") return growth_j_log_j();
    if (token.rfind("linear:", 0) == 0) return growth_linear(value_after_colon("linear:"));
    if (token.rfind("const:", 0) == 0) return growth_constant(value_after_colon("const:"));
    throw ArgumentError("unknown growth function '" + token +
                        "' (expected identity, linear:<c>, jlogj or const:<c>)");
}

std::size_t PropertyPSequence::level_of(std::uint64_t j) const {
    return static_cast<std::size_t>(std::upper_bound(levels.begin(), levels.end(), j) - levels.begin());
}

PropertyPSequence property_P_sequence(const PropertyPConfig& config) {
    const unsigned k = config.power;
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (!config.f.eval) throw ArgumentError("growth function is empty");
    const std::uint64_t count = config.count;
    const std::uint64_t horizon = std::max<std::uint64_t>(config.scan_horizon, count + 1);
    const auto& f = config.f.eval;

    PropertyPSequence seq;
    PrimeTable table = build_prime_table(1000);
    std::vector<std::uint64_t> residues;  // CRT class c_r (mod W_r) of -i mod p_i^k, i <= r

    // Levels: l_r is the smallest j0 > l_{r-1} with f(j) >= W_r on [j0, horizon].
    std::uint64_t prev_level = 0;
    std::uint64_t W = 1;
    std::uint64_t c = 0;
    for (std::size_t r = 1; prev_level <= count; ++r) {
        if (r > table.size()) table = build_prime_table(table.limit * 4);
        const std::uint64_t p = table.p(r);
        auto pk = checked_pow(p, k);
        const auto next_W = pk ? std::optional<unsigned __int128>(static_cast<unsigned __int128>(W) * *pk)
                               : std::nullopt;
        if (!next_W || *next_W > UINT64_MAX || f(horizon) < static_cast<std::uint64_t>(*next_W)) {
            throw BudgetError("growth function " + config.f.name + " does not reach W_" +
                              std::to_string(r) + " within the scan horizon " +
                              std::to_string(horizon));
        }
        const std::uint64_t Wr = static_cast<std::uint64_t>(*next_W);
        std::uint64_t j0 = horizon;
        while (j0 > prev_level + 1 && f(j0 - 1) >= Wr) --j0;

        // Fold -r mod p_r^k into the running class modulo W.
        const std::uint64_t m = *pk;
        const std::uint64_t target = (m - (r % m)) % m;
        std::uint64_t cr = c;
        while (cr % m != target) cr += W;  // at most m steps since gcd(W, m) = 1
        c = cr;
        W = Wr;

        seq.levels.push_back(j0);
        seq.moduli.push_back(W);
        residues.push_back(c);
        prev_level = j0;
    }

    seq.terms.reserve(count);
    for (std::uint64_t j = 1; j <= count; ++j) {
        const std::size_t level = seq.level_of(j);
        if (level == 0 || j <= seq.levels.front()) {
            seq.terms.push_back(j);
            continue;
        }
        const std::uint64_t mod = seq.moduli[level - 1];
        const std::uint64_t cls = residues[level - 1];
        const std::uint64_t floor_value = seq.terms.back() + 1;
        seq.terms.push_back(floor_value + (cls + mod - floor_value % mod) % mod);
    }
    return seq;
}

GreedySumsResult greedy_squarefree_sums(std::size_t count, bool include_diagonal, unsigned k) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    GreedySumsResult result;
    PrimeTable table = build_prime_table(64);
    auto divisor = [&](std::uint64_t n) {
        if (!table.covers(integer_root(n, k))) table = build_prime_table(std::max(table.limit * 2, integer_root(n, k)));
        return smallest_power_divisor(n, k, table);
    };

    for (std::uint64_t candidate = 1; result.terms.size() < count; ++candidate) {
        std::optional<GreedySkip> skip;
        for (std::uint64_t a : result.terms) {
            if (auto p = divisor(candidate + a)) {
                skip = GreedySkip{candidate, a, *p};
                break;
            }
        }
        if (!skip && include_diagonal) {
            if (auto p = divisor(2 * candidate)) skip = GreedySkip{candidate, candidate, *p};
        }
        if (skip) {
            result.skipped.push_back(*skip);
        } else {
            result.terms.push_back(candidate);
        }
    }
    return result;
}

}  // namespace sqfree
