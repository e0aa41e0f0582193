// large_sieve.hpp
// Exact evaluation of large sieve bounds for linear and power moduli, and a
// direct numeric check of the prime-power exponential sum inequality behind
// the power-moduli version.

#pragma once

#include "sqfree/errors.hpp"
#include "sqfree/numeric.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sqfree {

enum class OmegaPreset { ConstantOne, EsSumfree, Custom };

// Number of removed residue classes omega(p^k) modulo p^k, per prime.
struct OmegaProfile {
    unsigned power = 2;
    OmegaPreset preset = OmegaPreset::ConstantOne;
    std::function<std::uint64_t(std::uint64_t)> rule;  // Custom only

    static OmegaProfile constant_one(unsigned k = 2);
    static OmegaProfile es_sumfree(unsigned k = 2);
    static OmegaProfile custom(unsigned k, std::function<std::uint64_t(std::uint64_t)> rule);

    // omega(p^power); DomainError unless 0 <= omega < p^power.
    std::uint64_t omega(std::uint64_t p) const;
    // The same rule evaluated at another exponent.
    OmegaProfile with_power(unsigned k) const;
};

std::string to_string(OmegaPreset preset);
OmegaPreset parse_omega_preset(const std::string& token);  // "one", "es-sumfree"

enum class ModuliFlavor {
    Linear,  // classes modulo p, separation Q^2
    Power,   // classes modulo p^k, separation Q^(2k)
};

std::string to_string(ModuliFlavor flavor);
ModuliFlavor parse_moduli_flavor(const std::string& token);  // "linear", "power"

struct SieveBoundQuery {
    std::uint64_t N = 1;
    std::uint64_t Q = 1;
    OmegaProfile profile;
    ModuliFlavor flavor = ModuliFlavor::Power;
    // Window offset: the bound does not depend on it, so it is accepted and ignored.
    std::optional<BigInt> M;
};

// mu^2(q) prod_{p | q} omega(p^k) / (p^k - omega(p^k)).
Rational h_weight(std::uint64_t q, const OmegaProfile& profile);

// sum_{q <= Q} h_weight(q).
Rational h_sum(std::uint64_t Q, const OmegaProfile& profile);

// (N + Q^2) / h_sum for Linear (profile read at k = 1), (N + Q^(2k)) / h_sum for Power.
Rational sieve_bound(const SieveBoundQuery& query);

struct QOptimum {
    std::uint64_t Q = 1;
    Rational bound;
};

// Smallest Q in [Q_lo, Q_hi] minimising sieve_bound.
QOptimum optimize_Q(std::uint64_t N, const OmegaProfile& profile, ModuliFlavor flavor,
                    std::uint64_t Q_lo, std::uint64_t Q_hi);

// Classes modulo m = p^k forced out when A + A avoids 0 mod m (diagonal included):
// (m + 1) / 2 for odd p, m / 2 + 1 for p = 2 with m >= 4.
std::uint64_t es_omega(std::uint64_t p, unsigned k = 2);

struct SqSieveCheck {
    double lhs = 0.0;   // sum_{1 <= a < p^k} |S(a / p^k)|^2
    double rhs = 0.0;   // omega / (p^k - omega) |S(0)|^2
    bool holds = false;
    double plancherel_sum = 0.0;       // sum_{1 <= a < p^k} |c_a|^2
    double plancherel_expected = 0.0;  // (p^k - omega) omega
    bool plancherel_ok = false;
};

inline constexpr double kSqSieveTolerance = 1e-9;

// Coefficients a_n for n = start, start + 1, ...; `removed` lists the omega
// removed classes modulo p^k. ArgumentError when a nonzero coefficient sits
// on a removed class.
SqSieveCheck verify_sqsieve_inequality(std::uint64_t p, unsigned k,
                                       const std::vector<std::uint64_t>& removed,
                                       std::int64_t start,
                                       const std::vector<std::complex<double>>& coefficients);

}  // namespace sqfree
