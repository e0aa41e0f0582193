#include "sqfree/sieve_core.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace sqfree {

std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned k) {
    unsigned __int128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
        acc *= base;
        if (acc > UINT64_MAX) return std::nullopt;
    }
    return static_cast<std::uint64_t>(acc);
}

std::uint64_t integer_root(std::uint64_t n, unsigned k) {
    if (k == 0) throw ArgumentError("integer_root: k must be positive");
    if (k == 1 || n < 2) return n;
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
    auto le = [&](std::uint64_t c) {
        auto pk = checked_pow(c, k);
        return pk && *pk <= n;
    };
    while (r > 0 && !le(r)) --r;
    while (le(r + 1)) ++r;
    return r;
}

BigInt integer_root(const BigInt& n, unsigned k) {
    if (k == 0) throw ArgumentError("integer_root: k must be positive");
    if (n < 0) throw ArgumentError("integer_root: negative argument");
    BigInt r;
    mpz_root(r.backend().data(), n.backend().data(), k);
    return r;
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    if (!covers(n)) throw CoverageError("prime table limit " + std::to_string(limit) +
                                        " does not reach " + std::to_string(n));
    return std::binary_search(primes.begin(), primes.end(), n);
}

PrimeTable build_prime_table(std::uint64_t limit, std::uint64_t budget) {
    if (limit > budget) {
        throw ResourceError("prime table limit " + std::to_string(limit) +
                            " exceeds the configured budget " + std::to_string(budget));
    }
    PrimeTable table;
    table.limit = limit;
    if (limit < 2) return table;

    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) table.primes.push_back(i);
    }
    return table;
}

void require_coverage(const PrimeTable& table, std::uint64_t n, unsigned k) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    const std::uint64_t needed = integer_root(n, k);
    if (!table.covers(needed)) {
        throw CoverageError("prime table limit " + std::to_string(table.limit) +
                            " does not cover primes up to " + std::to_string(needed) +
                            " needed for n = " + std::to_string(n));
    }
}

std::optional<std::uint64_t> smallest_power_divisor(std::uint64_t n, unsigned k,
                                                    const PrimeTable& table) {
    if (n == 0) throw ArgumentError("k-freeness is defined for n >= 1");
    require_coverage(table, n, k);
    for (std::uint64_t p : table) {
        auto pk = checked_pow(p, k);
        if (!pk || *pk > n) break;
        if (n % *pk == 0) return p;
    }
    return std::nullopt;
}

bool is_power_free(std::uint64_t n, unsigned k, const PrimeTable& table) {
    return !smallest_power_divisor(n, k, table).has_value();
}

std::optional<std::uint64_t> smallest_power_divisor_among(const BigInt& n, unsigned k,
                                                          std::span<const std::uint64_t> primes) {
    for (std::uint64_t p : primes) {
        auto pk = checked_pow(p, k);
        if (!pk || BigInt(*pk) > n) break;
        if (mod_u64(n, *pk) == 0) return p;
    }
    return std::nullopt;
}

KFreeWindow::KFreeWindow(std::uint64_t start, std::uint64_t length, unsigned power,
                         std::vector<bool> flags)
    : start_(start), length_(length), power_(power), flags_(std::move(flags)) {
    if (flags_.size() != length_) throw ArgumentError("KFreeWindow: flag count mismatch");
}

std::uint64_t KFreeWindow::count() const {
    return static_cast<std::uint64_t>(std::count(flags_.begin(), flags_.end(), true));
}

std::vector<std::uint64_t> KFreeWindow::members() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < length_; ++i) {
        if (flags_[i]) out.push_back(start_ + i);
    }
    return out;
}

namespace {

// Clears flags of multiples of p^k inside [start, start + length).
template <typename Flags>
void sieve_segment(Flags& flags, std::uint64_t start, std::uint64_t length, unsigned k,
                   const PrimeTable& table) {
    if (length == 0) return;
    const std::uint64_t last = start + length - 1;
    for (std::uint64_t p : table) {
        auto pk = checked_pow(p, k);
        if (!pk || *pk > last) break;
        const std::uint64_t m = *pk;
        std::uint64_t first = (start + m - 1) / m * m;
        for (std::uint64_t n = first; n <= last; n += m) flags[n - start] = 0;
    }
}

}  // namespace

KFreeWindow kfree_window(std::uint64_t start, std::uint64_t length, unsigned k,
                         const PrimeTable& table) {
    if (start == 0) throw ArgumentError("kfree_window: start must be at least 1");
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (length == 0) return KFreeWindow(start, 0, k, {});
    require_coverage(table, start + length - 1, k);
    std::vector<bool> flags(length, true);
    sieve_segment(flags, start, length, k, table);
    return KFreeWindow(start, length, k, std::move(flags));
}

std::uint64_t count_power_free_upto(std::uint64_t x, unsigned k, const PrimeTable& table) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (x == 0) return 0;
    require_coverage(table, x, k);
    std::uint64_t total = 0;
    std::vector<unsigned char> flags;
    for (std::uint64_t lo = 1; lo <= x; lo += kSegmentLength) {
        const std::uint64_t len = std::min(kSegmentLength, x - lo + 1);
        flags.assign(len, 1);
        sieve_segment(flags, lo, len, k, table);
        total += static_cast<std::uint64_t>(std::count(flags.begin(), flags.end(), 1));
        if (x - lo + 1 <= kSegmentLength) break;
    }
    return total;
}

std::vector<std::uint64_t> power_free_prefix_counts(std::uint64_t x, unsigned k,
                                                    const PrimeTable& table) {
    std::vector<std::uint64_t> counts(x + 1, 0);
    if (x == 0) return counts;
    auto window = kfree_window(1, x, k, table);
    for (std::uint64_t i = 1; i <= x; ++i) counts[i] = counts[i - 1] + (window.flag(i - 1) ? 1 : 0);
    return counts;
}

double zeta(unsigned k) {
    if (k < 2) throw ArgumentError("zeta: k must be at least 2");
    if (k == 2) return std::numbers::pi * std::numbers::pi / 6.0;

    static std::mutex mu;
    static std::map<unsigned, double> cache;
    std::lock_guard lock(mu);
    if (auto it = cache.find(k); it != cache.end()) return it->second;

    // Truncation error of sum_{n<=N} n^-k is below N^(1-k)/(k-1).
    constexpr double tolerance = 1e-12;
    double n_terms = std::ceil(std::pow(tolerance * (k - 1), -1.0 / (k - 1)));
    auto terms = static_cast<std::uint64_t>(n_terms);
    double sum = 0.0;
    for (std::uint64_t n = terms; n >= 1; --n) sum += std::pow(static_cast<double>(n), -double(k));
    cache.emplace(k, sum);
    return sum;
}

double density_main_term(std::uint64_t x, unsigned k) {
    return static_cast<double>(x) / zeta(k);
}

ResidueClass::ResidueClass(BigInt residue_, BigInt modulus_)
    : residue(std::move(residue_)), modulus(std::move(modulus_)) {
    if (modulus < 1) throw ArgumentError("residue class modulus must be at least 1");
    if (residue < 0 || residue >= modulus) {
        throw ArgumentError("residue " + residue.str() + " not in [0, " + modulus.str() + ")");
    }
}

bool ResidueClass::contains(const BigInt& n) const {
    BigInt r = n % modulus;
    if (r < 0) r += modulus;
    return r == residue;
}

ResidueClass crt_combine(std::span<const ResidueClass> classes) {
    if (classes.empty()) throw ArgumentError("crt_combine: empty class list");
    BigInt r = classes.front().residue;
    BigInt m = classes.front().modulus;
    for (const auto& c : classes.subspan(1)) {
        BigInt inv;
        BigInt m_mod = m % c.modulus;
        if (gcd(m, c.modulus) != 1 ||
            (c.modulus > 1 &&
             mpz_invert(inv.backend().data(), m_mod.backend().data(), c.modulus.backend().data()) == 0)) {
            throw ArgumentError("crt_combine: moduli " + m.str() + " and " + c.modulus.str() +
                                " are not coprime");
        }
        if (c.modulus == 1) continue;
        BigInt t = ((c.residue - r) % c.modulus) * inv % c.modulus;
        if (t < 0) t += c.modulus;
        r += m * t;
        m *= c.modulus;
    }
    return ResidueClass(r, m);
}

std::uint64_t count_class_in_interval(std::uint64_t lo, std::uint64_t hi,
                                      std::span<const ResidueClass> classes) {
    if (lo > hi + 1) throw ArgumentError("count_class_in_interval: need lo <= hi + 1");
    if (hi < lo) return 0;
    if (classes.empty()) return hi - lo + 1;
    const ResidueClass c = crt_combine(classes);
    // #{n <= t : n = r mod M} for t >= -1, via floor division.
    auto upto = [&](const BigInt& t) -> BigInt {
        BigInt shifted = t - c.residue;
        if (shifted < 0) return 0;
        return shifted / c.modulus + 1;
    };
    BigInt count = upto(BigInt(hi)) - upto(BigInt(lo) - 1);
    return to_u64(count);
}

}  // namespace sqfree
