#include "sqfree/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace sqfree {

namespace {

struct ForcedPrime {
    std::uint64_t prime;
    std::uint64_t modulus;  // p^k
    std::uint64_t shifts;   // 1 <= a <= shifts must avoid -n mod p^k
};

BigInt threshold_modulus(std::uint64_t P, unsigned k) {
    BigInt W = 1;
    for (std::uint64_t p : build_prime_table(P)) {
        for (unsigned i = 0; i < k; ++i) W *= p;
    }
    return W;
}

// n + a = 0 mod p^k for some 1 <= a <= shifts, given r = n mod p^k.
bool hit(std::uint64_t r, const ForcedPrime& f) {
    return r != 0 && f.modulus - r <= f.shifts;
}

// Primes P < p <= cap with p^k <= hi + shifts(p): every prime that can matter for n <= hi.
std::vector<ForcedPrime> forced_primes(std::uint64_t P, const BigInt& hi, unsigned k,
                                       std::uint64_t cap) {
    const BigInt root = integer_root(hi, k) + 1;
    const std::uint64_t limit = fits_u64(root) ? std::min<std::uint64_t>(to_u64(root), cap) : cap;
    std::vector<ForcedPrime> out;
    for (std::uint64_t p : build_prime_table(limit)) {
        if (p <= P) continue;
        const auto pk = checked_pow(p, k);
        if (!pk) break;
        const std::uint64_t shifts = overp_shift_limit(p);
        if (BigInt(*pk) > hi + shifts) break;
        out.push_back({p, *pk, shifts});
    }
    return out;
}

// Every prime above cap satisfies p^k > n + shifts(p).
bool range_within(const BigInt& n, unsigned k, std::uint64_t cap) {
    const auto pk = checked_pow(cap + 1, k);
    return pk && BigInt(*pk) > n + (cap + 1);
}

}  // namespace

std::uint64_t overp_shift_limit(std::uint64_t p) {
    if (p < 5) throw ArgumentError("the shift range is only defined for p >= 5");
    const double ll = std::log(std::log(double(p)));
    return static_cast<std::uint64_t>(std::floor(double(p) / (ll * ll)));
}

std::uint64_t overp_threshold(double K, std::size_t j) {
    if (!(K > 0.0)) throw ArgumentError("K must be positive");
    const double value = std::ceil(K * std::exp(std::exp(double(j))));
    if (!std::isfinite(value) || value >= 1.8e19) {
        throw BudgetError("threshold K exp(exp(" + std::to_string(j) + ")) exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(value);
}

std::optional<std::uint64_t> overp_first_failure(const BigInt& n, std::uint64_t threshold,
                                                 unsigned k, std::uint64_t prime_check_cap) {
    for (std::uint64_t p : build_prime_table(threshold)) {
        if (mod_u64(n, *checked_pow(p, k)) != 0) return p;
    }
    for (const auto& f : forced_primes(threshold, n, k, prime_check_cap)) {
        if (hit(mod_u64(n, f.modulus), f)) return f.prime;
    }
    return std::nullopt;
}

OverPPoint overP_base_point(const OverPConfig& config) {
    const unsigned k = config.power;
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (config.threshold < 3) throw ArgumentError("threshold P must be at least 3");
    OverPPoint point;
    point.modulus = threshold_modulus(config.threshold, k);
    const BigInt& W = point.modulus;

    const BigInt first_m = config.start_after < 0 ? BigInt(1) : BigInt(config.start_after / W + 1);
    const BigInt last_n = (first_m + config.candidate_budget) * W;
    const auto primes = forced_primes(config.threshold, last_n, k, config.prime_check_cap);

    // n = m W, so n mod p^k = (m mod p^k)(W mod p^k) mod p^k.
    std::vector<std::uint64_t> w_mod(primes.size()), m_mod(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        w_mod[i] = mod_u64(W, primes[i].modulus);
        m_mod[i] = mod_u64(first_m, primes[i].modulus);
    }

    BigInt n = first_m * W;
    for (std::uint64_t t = 0; t < config.candidate_budget; ++t, n += W) {
        ++point.candidates_examined;
        const std::uint64_t small_n = fits_u64(n) ? to_u64(n) : UINT64_MAX;
        bool ok = true;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            const auto& f = primes[i];
            if (small_n < UINT64_MAX - f.shifts && f.modulus > small_n + f.shifts) break;
            const std::uint64_t r = static_cast<std::uint64_t>(
                (static_cast<unsigned __int128>((m_mod[i] + t) % f.modulus) * w_mod[i]) % f.modulus);
            if (hit(r, f)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            point.n = n;
            point.fully_verified = range_within(n, k, config.prime_check_cap);
            point.checked_prime_limit = point.fully_verified
                                            ? std::min<std::uint64_t>(to_u64(integer_root(n, k) + 1),
                                                                      config.prime_check_cap)
                                            : config.prime_check_cap;
            return point;
        }
    }
    throw BudgetError("no base point among " + std::to_string(config.candidate_budget) +
                      " multiples of W for P = " + std::to_string(config.threshold));
}

OverPSequence overP_sequence(const OverPSequenceConfig& config) {
    const unsigned k = config.power;
    if (k < 2) throw ArgumentError("power k must be at least 2");
    OverPSequence seq;
    seq.custom_schedule = !config.custom_thresholds.empty();
    if (seq.custom_schedule && config.custom_thresholds.size() < config.depth) {
        throw ArgumentError("custom threshold schedule is shorter than the depth");
    }
    for (std::size_t j = 1; j <= config.depth; ++j) {
        const std::uint64_t P =
            seq.custom_schedule ? config.custom_thresholds[j - 1] : overp_threshold(config.K, j);
        // log2 W is about k * theta(P) * log2 e with theta(P) ~ P.
        const double bits = double(k) * double(P) * std::log2(std::exp(1.0));
        if (bits > double(config.bigint_budget_bits)) {
            throw BudgetError("P_" + std::to_string(j) + " = " + std::to_string(P) +
                              " needs a modulus of about " + std::to_string(std::uint64_t(bits)) +
                              " bits, over the budget of " +
                              std::to_string(config.bigint_budget_bits));
        }
        seq.thresholds.push_back(P);
    }

    BigInt previous = 0;
    for (std::uint64_t P : seq.thresholds) {
        OverPConfig cfg;
        cfg.threshold = P;
        cfg.candidate_budget = config.candidate_budget;
        cfg.prime_check_cap = config.prime_check_cap;
        cfg.power = k;
        cfg.start_after = previous;
        seq.anchors.push_back(overP_base_point(cfg));
        previous = seq.anchors.back().n;
    }

    // Induced set: a <= cap with a k-free and n_j + a free of p^k for every checked p.
    const std::uint64_t cap = config.induced_cap;
    std::vector<bool> keep(cap + 1, true);
    keep[0] = false;
    std::uint64_t limit = integer_root(cap, k);
    for (const auto& anchor : seq.anchors) {
        const BigInt root = integer_root(anchor.n + cap, k);
        limit = std::max(limit, fits_u64(root) ? std::min(to_u64(root), config.prime_check_cap)
                                               : config.prime_check_cap);
    }
    seq.induced_prime_limit = limit;
    for (std::uint64_t p : build_prime_table(limit)) {
        const auto pk = checked_pow(p, k);
        if (!pk) break;
        for (std::uint64_t a = *pk; a <= cap; a += *pk) keep[a] = false;
        for (const auto& anchor : seq.anchors) {
            const std::uint64_t r = mod_u64(anchor.n, *pk);
            for (std::uint64_t a = (*pk - r) % *pk; a <= cap; a += *pk) keep[a] = false;
        }
    }
    for (std::uint64_t a = 1; a <= cap; ++a) {
        if (keep[a]) seq.induced.push_back(a);
    }
    return seq;
}

}  // namespace sqfree
