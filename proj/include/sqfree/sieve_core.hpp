// sieve_core.hpp
// Prime tables, k-free sieving and counting, CRT arithmetic and residue-class
// counting inside intervals.
//
// Every routine that decides k-freeness takes an explicit PrimeTable and
// refuses (CoverageError) when the table stops short of n^(1/k). Nothing here
// guesses primality beyond its table.

#pragma once

#include "sqfree/errors.hpp"
#include "sqfree/numeric.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sqfree {

// Largest limit build_prime_table accepts unless the caller raises it.
inline constexpr std::uint64_t kDefaultPrimeLimitBudget = std::uint64_t{1} << 30;

// Default segment length for segmented sieving (numbers per segment).
inline constexpr std::uint64_t kSegmentLength = std::uint64_t{1} << 16;

// Ordered primes up to `limit`; p(1) = 2, p(2) = 3, ...
struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;

    std::size_t size() const noexcept { return primes.size(); }
    bool empty() const noexcept { return primes.empty(); }

    // 1-based access matching p_1 = 2 < p_2 < ...
    std::uint64_t p(std::size_t r) const { return primes.at(r - 1); }

    // True when every prime <= n is listed.
    bool covers(std::uint64_t n) const noexcept { return limit >= n; }

    bool is_prime(std::uint64_t n) const;

    auto begin() const noexcept { return primes.begin(); }
    auto end() const noexcept { return primes.end(); }
};

PrimeTable build_prime_table(std::uint64_t limit,
                             std::uint64_t budget = kDefaultPrimeLimitBudget);

// Throws CoverageError unless `table` lists every prime p with p^k <= n.
void require_coverage(const PrimeTable& table, std::uint64_t n, unsigned k);

bool is_power_free(std::uint64_t n, unsigned k, const PrimeTable& table);

// Smallest prime p with p^k | n, if any. Same coverage rule as is_power_free.
std::optional<std::uint64_t> smallest_power_divisor(std::uint64_t n, unsigned k,
                                                    const PrimeTable& table);

// Smallest listed prime p with p^k | n among `primes` (no coverage check; the
// caller decides what certification the prime list amounts to).
std::optional<std::uint64_t> smallest_power_divisor_among(const BigInt& n, unsigned k,
                                                          std::span<const std::uint64_t> primes);

// Membership flags of the k-free numbers in [start, start + length).
class KFreeWindow {
public:
    KFreeWindow(std::uint64_t start, std::uint64_t length, unsigned power,
                std::vector<bool> flags);

    std::uint64_t start() const noexcept { return start_; }
    std::uint64_t length() const noexcept { return length_; }
    unsigned power() const noexcept { return power_; }

    // Flag at offset i, i.e. for the number start + i.
    bool flag(std::uint64_t i) const { return flags_.at(i); }
    bool contains(std::uint64_t n) const {
        return n >= start_ && n - start_ < length_ && flags_[n - start_];
    }
    std::uint64_t count() const;
    std::vector<std::uint64_t> members() const;
    const std::vector<bool>& flags() const noexcept { return flags_; }

private:
    std::uint64_t start_;
    std::uint64_t length_;
    unsigned power_;
    std::vector<bool> flags_;
};

KFreeWindow kfree_window(std::uint64_t start, std::uint64_t length, unsigned k,
                         const PrimeTable& table);

// |{n <= x : n is k-free}|, computed segment by segment.
std::uint64_t count_power_free_upto(std::uint64_t x, unsigned k, const PrimeTable& table);

// Running counts c[i] = |{n <= i : n k-free}| for i = 0..x.
std::vector<std::uint64_t> power_free_prefix_counts(std::uint64_t x, unsigned k,
                                                    const PrimeTable& table);

// Riemann zeta at an integer k >= 2.
double zeta(unsigned k);

// x / zeta(k), the main term of the k-free counting function.
double density_main_term(std::uint64_t x, unsigned k);

// A residue class b mod m with 0 <= b < m.
struct ResidueClass {
    BigInt residue;
    BigInt modulus;

    ResidueClass(BigInt residue, BigInt modulus);
    bool contains(const BigInt& n) const;
    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

// The unique class modulo the product of the (pairwise coprime) moduli that
// lies inside every input class.
ResidueClass crt_combine(std::span<const ResidueClass> classes);

// Number of integers in [lo, hi] lying in every listed class.
std::uint64_t count_class_in_interval(std::uint64_t lo, std::uint64_t hi,
                                      std::span<const ResidueClass> classes);

}  // namespace sqfree
