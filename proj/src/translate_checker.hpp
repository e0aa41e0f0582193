#pragma once

#include "sqfree/numeric.hpp"
#include "sqfree/sieve_core.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sqfree::detail {

// For each prime p, the residues t = -a mod p^k over a fixed set of shifts a.
// n + a is divisible by p^k for some a exactly when n mod p^k is one of them.
class TranslateChecker {
public:
    struct PrimeEntry {
        std::uint64_t prime;
        std::uint64_t modulus;
        std::vector<std::uint64_t> bad;  // sorted, unique
    };

    TranslateChecker(std::span<const BigInt> shifts, std::span<const std::uint64_t> primes,
                     unsigned k) {
        for (std::uint64_t p : primes) {
            auto pk = checked_pow(p, k);
            if (!pk) break;
            PrimeEntry e{p, *pk, {}};
            e.bad.reserve(shifts.size());
            for (const auto& a : shifts) {
                const std::uint64_t r = mod_u64(a, *pk);
                e.bad.push_back(r == 0 ? 0 : *pk - r);
            }
            std::sort(e.bad.begin(), e.bad.end());
            e.bad.erase(std::unique(e.bad.begin(), e.bad.end()), e.bad.end());
            entries_.push_back(std::move(e));
        }
    }

    // First prime p whose k-th power divides n + a for some shift a.
    std::optional<std::uint64_t> blocking(std::uint64_t n) const {
        for (const auto& e : entries_) {
            if (std::binary_search(e.bad.begin(), e.bad.end(), n % e.modulus)) return e.prime;
        }
        return std::nullopt;
    }

    // Marks (sets to 0) every n in [lo, lo + flags.size()) that some shift blocks.
    void sieve(std::uint64_t lo, std::vector<unsigned char>& flags) const {
        const std::uint64_t len = flags.size();
        for (const auto& e : entries_) {
            const std::uint64_t m = e.modulus;
            const std::uint64_t lo_mod = lo % m;
            for (std::uint64_t t : e.bad) {
                std::uint64_t offset = (t + m - lo_mod) % m;
                for (std::uint64_t i = offset; i < len; i += m) flags[i] = 0;
            }
        }
    }

    const std::vector<PrimeEntry>& entries() const noexcept { return entries_; }

private:
    std::vector<PrimeEntry> entries_;
};

// Primes of `table` not exceeding `cutoff`.
inline std::span<const std::uint64_t> primes_upto(const PrimeTable& table, std::uint64_t cutoff) {
    auto end = std::upper_bound(table.primes.begin(), table.primes.end(), cutoff);
    return {table.primes.data(), static_cast<std::size_t>(end - table.primes.begin())};
}

}  // namespace sqfree::detail
