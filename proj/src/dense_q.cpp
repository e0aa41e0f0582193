#include "sqfree/constructions.hpp"

#include "translate_checker.hpp"

#include <algorithm>
#include <cmath>

namespace sqfree {

namespace {

// Ratio |{a in SF_k cap [R] : anchor + a in SF_k}| / R on R = n, (1+eps) n, ..., min(hi, cap).
std::vector<GridPoint> density_grid(std::uint64_t anchor, std::uint64_t from, std::uint64_t to,
                                    double epsilon, std::uint64_t cap, unsigned k) {
    std::vector<GridPoint> grid;
    const std::uint64_t top = std::min(to, cap);
    if (from < 1 || from > top) return grid;
    const PrimeTable table = build_prime_table(integer_root(anchor + top, k));
    const KFreeWindow low = kfree_window(1, top, k, table);
    const KFreeWindow high = kfree_window(anchor + 1, top, k, table);

    std::vector<std::uint64_t> Rs;
    for (double R = double(from); R < double(top); R *= 1.0 + epsilon) {
        Rs.push_back(static_cast<std::uint64_t>(R));
    }
    Rs.push_back(top);
    Rs.erase(std::unique(Rs.begin(), Rs.end()), Rs.end());

    const double density = 1.0 / zeta(k);
    std::uint64_t hits = 0;
    std::uint64_t done = 0;
    for (std::uint64_t R : Rs) {
        for (; done < R; ++done) {
            if (low.flag(done) && high.flag(done)) ++hits;
        }
        const double ratio = double(hits) / double(R);
        grid.push_back({R, ratio, density - ratio});
    }
    return grid;
}

}  // namespace

std::vector<std::uint64_t> slice_members(const DenseQSlice& slice, unsigned k, std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (slice.hi <= slice.lo || limit == 0) return out;
    const PrimeTable table = build_prime_table(integer_root(slice.anchor + slice.hi, k));
    std::uint64_t lo = slice.lo + 1;
    while (lo <= slice.hi && out.size() < limit) {
        const std::uint64_t len = std::min(kSegmentLength, slice.hi - lo + 1);
        const KFreeWindow a = kfree_window(lo, len, k, table);
        const KFreeWindow shifted = kfree_window(slice.anchor + lo, len, k, table);
        for (std::uint64_t i = 0; i < len && out.size() < limit; ++i) {
            if (a.flag(i) && shifted.flag(i)) out.push_back(lo + i);
        }
        lo += len;
    }
    return out;
}

DenseQState dense_Q_step(DenseQState state, const DenseQConfig& config) {
    const unsigned k = state.power;
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (state.anchors.empty()) {
        if (config.initial_anchor < 1) throw ArgumentError("initial anchor must be positive");
        state.anchors.push_back(config.initial_anchor);
        return state;
    }
    if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) {
        throw ArgumentError("epsilon must lie in (0, 1)");
    }
    const std::uint64_t n = state.anchors.back();
    const std::uint64_t step = state.anchors.size();  // n = n_step
    const std::uint64_t x = config.x;

    const std::uint64_t n_sq = n > UINT32_MAX ? UINT64_MAX : n * n;
    BigInt W = 1;
    // Past p = 1000 the product has long exceeded any 64-bit x.
    for (std::uint64_t p : build_prime_table(std::min<std::uint64_t>(n_sq, 1000))) {
        for (unsigned i = 0; i < k; ++i) W *= p;
        if (W > x) break;
    }
    const std::uint64_t lower = std::max<std::uint64_t>((x + 1) / 2, (step + 1) * n);
    if (W > x) {
        throw ArgumentError("W = prod_{p <= " + std::to_string(n) + "^2} p^" + std::to_string(k) +
                            " exceeds x = " + std::to_string(x));
    }
    const std::uint64_t w = to_u64(W);
    const std::uint64_t first_mult = (lower + w - 1) / w;
    const std::uint64_t last_mult = x / w;
    if (lower > x || first_mult > last_mult) {
        throw ArgumentError("no multiple of W = " + std::to_string(w) + " lies in [" +
                            std::to_string(lower) + ", " + std::to_string(x) + "]");
    }
    const std::uint64_t count = last_mult - first_mult + 1;

    // Condition (i): n' + a k-free for all k-free a <= n.
    const PrimeTable table = build_prime_table(integer_root(x + n, k));
    std::vector<BigInt> shifts;
    for (std::uint64_t a = 1; a <= n; ++a) {
        if (is_power_free(a, k, table)) shifts.emplace_back(a);
    }
    detail::TranslateChecker checker(shifts, table.primes, k);

    std::uint64_t start = 0;
    if (config.order == ScanOrder::SeededRandom) {
        start = static_cast<std::uint64_t>(keyed_uniform(config.seed, n) * double(count)) % count;
    }
    const std::uint64_t budget = std::min(count, config.max_candidates);
    std::uint64_t examined = 0;
    std::optional<std::uint64_t> accepted;
    for (std::uint64_t t = 0; t < budget; ++t) {
        const std::uint64_t candidate = (first_mult + (start + t) % count) * w;
        ++examined;
        if (!checker.blocking(candidate)) {
            accepted = candidate;
            break;
        }
    }
    if (!accepted) {
        throw BudgetError("all " + std::to_string(examined) +
                          " candidate multiples of W failed condition (i)");
    }
    state.anchors.push_back(*accepted);
    state.epsilons.push_back(config.epsilon);
    state.slices.push_back({n, *accepted, *accepted});
    state.grids.push_back(density_grid(*accepted, n, *accepted, config.epsilon, config.grid_cap, k));
    state.candidates_examined.push_back(examined);
    return state;
}

}  // namespace sqfree
