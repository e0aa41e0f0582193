#include "sqfree/large_sieve.hpp"

#include <cmath>
#include <numbers>

namespace sqfree {

namespace {

// Prime factors of q, or nullopt when q is not squarefree.
std::optional<std::vector<std::uint64_t>> squarefree_factors(std::uint64_t q) {
    std::vector<std::uint64_t> primes;
    for (std::uint64_t d = 2; d * d <= q; ++d) {
        if (q % d != 0) continue;
        q /= d;
        if (q % d == 0) return std::nullopt;
        primes.push_back(d);
    }
    if (q > 1) primes.push_back(q);
    return primes;
}

bool is_prime_u64(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

std::uint64_t prime_power(std::uint64_t p, unsigned k) {
    auto pk = checked_pow(p, k);
    if (!pk) throw DomainError("p^k exceeds 64 bits");
    return *pk;
}

}  // namespace

OmegaProfile OmegaProfile::constant_one(unsigned k) {
    OmegaProfile profile;
    profile.power = k;
    profile.preset = OmegaPreset::ConstantOne;
    return profile;
}

OmegaProfile OmegaProfile::es_sumfree(unsigned k) {
    OmegaProfile profile;
    profile.power = k;
    profile.preset = OmegaPreset::EsSumfree;
    return profile;
}

OmegaProfile OmegaProfile::custom(unsigned k, std::function<std::uint64_t(std::uint64_t)> rule) {
    if (!rule) throw ArgumentError("custom omega profile needs a rule");
    OmegaProfile profile;
    profile.power = k;
    profile.preset = OmegaPreset::Custom;
    profile.rule = std::move(rule);
    return profile;
}

OmegaProfile OmegaProfile::with_power(unsigned k) const {
    OmegaProfile copy = *this;
    copy.power = k;
    return copy;
}

std::uint64_t OmegaProfile::omega(std::uint64_t p) const {
    if (power < 1) throw DomainError("omega profile power must be positive");
    const std::uint64_t m = prime_power(p, power);
    std::uint64_t w = 0;
    switch (preset) {
        case OmegaPreset::ConstantOne: w = 1; break;
        case OmegaPreset::EsSumfree: w = es_omega(p, power); break;
        case OmegaPreset::Custom: w = rule(p); break;
    }
    if (w >= m) {
        throw DomainError("omega(" + std::to_string(p) + "^" + std::to_string(power) + ") = " +
                          std::to_string(w) + " is not below the modulus " + std::to_string(m));
    }
    return w;
}

std::string to_string(OmegaPreset preset) {
    switch (preset) {
        case OmegaPreset::ConstantOne: return "one";
        case OmegaPreset::EsSumfree: return "es-sumfree";
        case OmegaPreset::Custom: return "custom";
    }
    return "?";
}

OmegaPreset parse_omega_preset(const std::string& token) {
    if (token == "one") return OmegaPreset::ConstantOne;
    if (token == "es-sumfree") return OmegaPreset::EsSumfree;
    throw ArgumentError("unknown omega profile '" + token + "' (expected one or es-sumfree)");
}

std::string to_string(ModuliFlavor flavor) {
    return flavor == ModuliFlavor::Linear ? "linear" : "power";
}

ModuliFlavor parse_moduli_flavor(const std::string& token) {
    if (token == "linear") return ModuliFlavor::Linear;
    if (token == "power") return ModuliFlavor::Power;
    throw ArgumentError("unknown moduli flavor '" + token + "' (expected linear or power)");
}

Rational h_weight(std::uint64_t q, const OmegaProfile& profile) {
    if (q < 1) throw ArgumentError("h_weight needs q >= 1");
    const auto primes = squarefree_factors(q);
    if (!primes) return Rational(0);
    Rational h = 1;
    for (std::uint64_t p : *primes) {
        const std::uint64_t w = profile.omega(p);
        const std::uint64_t m = prime_power(p, profile.power);
        h *= Rational(BigInt(w), BigInt(m - w));
    }
    return h;
}

Rational h_sum(std::uint64_t Q, const OmegaProfile& profile) {
    if (Q < 1) throw ArgumentError("h_sum needs Q >= 1");
    Rational total = 0;
    for (std::uint64_t q = 1; q <= Q; ++q) total += h_weight(q, profile);
    return total;
}

Rational sieve_bound(const SieveBoundQuery& query) {
    if (query.N < 1) throw ArgumentError("N must be at least 1");
    if (query.Q < 1) throw ArgumentError("Q must be at least 1");
    const bool linear = query.flavor == ModuliFlavor::Linear;
    const OmegaProfile profile = linear ? query.profile.with_power(1) : query.profile;
    BigInt separation = 1;
    const unsigned exponent = 2 * profile.power;
    for (unsigned i = 0; i < exponent; ++i) separation *= query.Q;
    return Rational(BigInt(query.N) + separation) / h_sum(query.Q, profile);
}

QOptimum optimize_Q(std::uint64_t N, const OmegaProfile& profile, ModuliFlavor flavor,
                    std::uint64_t Q_lo, std::uint64_t Q_hi) {
    if (Q_lo < 1 || Q_lo > Q_hi) throw ArgumentError("Q range must be a nonempty subrange of [1, oo)");
    const bool linear = flavor == ModuliFlavor::Linear;
    const OmegaProfile eff = linear ? profile.with_power(1) : profile;
    const unsigned exponent = 2 * eff.power;

    QOptimum best;
    Rational sum = h_sum(Q_lo, eff);
    for (std::uint64_t Q = Q_lo; Q <= Q_hi; ++Q) {
        if (Q > Q_lo) sum += h_weight(Q, eff);
        BigInt separation = 1;
        for (unsigned i = 0; i < exponent; ++i) separation *= Q;
        const Rational bound = Rational(BigInt(N) + separation) / sum;
        if (Q == Q_lo || bound < best.bound) best = {Q, bound};
    }
    return best;
}

std::uint64_t es_omega(std::uint64_t p, unsigned k) {
    if (!is_prime_u64(p)) throw ArgumentError(std::to_string(p) + " is not prime");
    if (k < 1) throw ArgumentError("power must be positive");
    const std::uint64_t m = prime_power(p, k);
    if (p == 2) {
        if (m < 4) throw DomainError("the sum-free class count is undefined modulo 2");
        return m / 2 + 1;
    }
    return (m + 1) / 2;
}

SqSieveCheck verify_sqsieve_inequality(std::uint64_t p, unsigned k,
                                       const std::vector<std::uint64_t>& removed,
                                       std::int64_t start,
                                       const std::vector<std::complex<double>>& coefficients) {
    if (!is_prime_u64(p)) throw ArgumentError(std::to_string(p) + " is not prime");
    if (k < 1) throw ArgumentError("power must be positive");
    const std::uint64_t m = prime_power(p, k);
    if (m > (std::uint64_t{1} << 20)) throw ResourceError("modulus too large for direct evaluation");
    std::vector<bool> in_S(m, false);
    for (std::uint64_t r : removed) {
        if (r >= m) throw ArgumentError("removed class " + std::to_string(r) + " is not reduced mod p^k");
        if (in_S[r]) throw ArgumentError("removed class " + std::to_string(r) + " listed twice");
        in_S[r] = true;
    }
    const std::uint64_t omega = removed.size();
    if (omega >= m) throw DomainError("omega must be below p^k");

    auto residue = [&](std::int64_t n) {
        const std::int64_t r = n % static_cast<std::int64_t>(m);
        return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
    };
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const std::int64_t n = start + static_cast<std::int64_t>(i);
        if (coefficients[i] != std::complex<double>(0.0, 0.0) && in_S[residue(n)]) {
            throw ArgumentError("coefficient at n = " + std::to_string(n) + " lies on a removed class");
        }
    }

    const double two_pi = 2.0 * std::numbers::pi;
    auto e = [&](std::uint64_t a, std::uint64_t r) {
        const double angle = two_pi * double((a * r) % m) / double(m);
        return std::complex<double>(std::cos(angle), std::sin(angle));
    };

    SqSieveCheck out;
    std::complex<double> S0 = 0.0;
    for (const auto& c : coefficients) S0 += c;
    for (std::uint64_t a = 1; a < m; ++a) {
        std::complex<double> S = 0.0;
        for (std::size_t i = 0; i < coefficients.size(); ++i) {
            if (coefficients[i] == std::complex<double>(0.0, 0.0)) continue;
            S += coefficients[i] * e(a, residue(start + static_cast<std::int64_t>(i)));
        }
        out.lhs += std::norm(S);
    }
    out.rhs = double(omega) / double(m - omega) * std::norm(S0);
    out.holds = out.lhs >= out.rhs - kSqSieveTolerance * std::max(1.0, std::abs(out.rhs));

    // nu(n) = omega - m 1_S(n) has Fourier coefficients c_a = (1/m) sum_n nu(n) e(-a n / m).
    for (std::uint64_t a = 1; a < m; ++a) {
        std::complex<double> c = 0.0;
        for (std::uint64_t n = 0; n < m; ++n) {
            const double nu = double(omega) - (in_S[n] ? double(m) : 0.0);
            c += nu * std::conj(e(a, n));
        }
        c /= double(m);
        out.plancherel_sum += std::norm(c);
    }
    out.plancherel_expected = double(m - omega) * double(omega);
    out.plancherel_ok = std::abs(out.plancherel_sum - out.plancherel_expected) <=
                        kSqSieveTolerance * std::max(1.0, out.plancherel_expected);
    return out;
}

}  // namespace sqfree
