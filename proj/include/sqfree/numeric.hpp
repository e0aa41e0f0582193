#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace sqfree {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// floor(n^(1/k)) for k >= 1.
std::uint64_t integer_root(std::uint64_t n, unsigned k);
BigInt integer_root(const BigInt& n, unsigned k);

// base^k, or nullopt when the result does not fit in 64 bits.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned k);

// n mod m for a positive 64-bit modulus.
inline std::uint64_t mod_u64(const BigInt& n, std::uint64_t m) {
    BigInt r = n % m;
    if (r < 0) r += m;
    return static_cast<std::uint64_t>(r);
}

inline bool fits_u64(const BigInt& n) {
    return n >= 0 && n <= BigInt(UINT64_MAX);
}

inline std::uint64_t to_u64(const BigInt& n) {
    return static_cast<std::uint64_t>(n);
}

inline std::string to_string(const BigInt& n) { return n.str(); }

// Double approximation of an exact rational (truncated toward zero by GMP).
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace sqfree
