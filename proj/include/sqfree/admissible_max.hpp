// admissible_max.hpp
// A(x): the largest number of survivors in [x] after removing one residue
// class modulo p^k for every prime p. Exact branch-and-bound, shift-based
// lower bounds, and the large sieve upper bound.

#pragma once

#include "sqfree/errors.hpp"
#include "sqfree/numeric.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sqfree {

enum class MaxStatus { Exact, LowerBound };

std::string to_string(MaxStatus status);  // "EXACT" / "LOWER_BOUND"

struct AdmissibleMaxResult {
    std::uint64_t x = 0;
    unsigned power = 2;
    std::uint64_t value = 0;
    std::map<std::uint64_t, std::uint64_t> witness;  // p -> b_p mod p^k, every p with p^k <= x
    MaxStatus status = MaxStatus::Exact;
    std::uint64_t nodes = 0;  // search tree nodes visited
};

// Primes p with p^k <= x, ascending. Only these constrain [x].
std::vector<std::uint64_t> constraining_primes(std::uint64_t x, unsigned k);

// |{a in [x] : a != b_p mod p^k for every listed p}|.
std::uint64_t survivor_count(std::uint64_t x, unsigned k,
                             const std::map<std::uint64_t, std::uint64_t>& classes);

using Seconds = std::chrono::duration<double>;

// EXACT when the tree is exhausted within the budget; the witness is then the
// lexicographically smallest maximiser in branch order (primes descending,
// classes ascending) unless that post-pass itself runs out of time.
AdmissibleMaxResult admissible_max_exact(std::uint64_t x, unsigned k = 2,
                                         Seconds time_budget = Seconds(60.0));

struct ShiftSource {
    std::uint64_t range_lo = 0;  // shifts y in [range_lo, range_hi]
    std::uint64_t range_hi = 0;
    std::uint64_t random_draws = 0;  // random residue tuples mod W = prod p^k
    std::uint64_t seed = 0;
};

struct ShiftLowerBound {
    std::uint64_t count = 0;
    BigInt shift = 0;  // first shift attaining count (range before draws)
};

// max over tried shifts y of |{a in [x] : p^k does not divide y + a for all p^k <= x}|.
ShiftLowerBound admissible_max_lower_shift(std::uint64_t x, unsigned k, const ShiftSource& source);

// floor of the smallest power-moduli sieve bound with omega = 1 over integer
// Q in [1, ceil(x^(1/(2k+1))) + 2].
std::uint64_t admissible_max_upper_sieve(std::uint64_t x, unsigned k = 2);

}  // namespace sqfree
