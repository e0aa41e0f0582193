#include "sqfree/property_checks.hpp"

#include <algorithm>

namespace sqfree {

FiniteSet::FiniteSet(std::vector<BigInt> elements) : elements_(std::move(elements)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i] < 1) throw ArgumentError("set elements must be >= 1");
        if (i > 0 && elements_[i] <= elements_[i - 1]) {
            throw ArgumentError("set elements must be strictly increasing");
        }
    }
}

FiniteSet::FiniteSet(std::initializer_list<std::uint64_t> elements)
    : FiniteSet(std::vector<BigInt>(elements.begin(), elements.end())) {}

FiniteSet FiniteSet::from_u64(const std::vector<std::uint64_t>& elements) {
    std::vector<BigInt> big(elements.begin(), elements.end());
    return FiniteSet(std::move(big));
}

const BigInt& FiniteSet::max() const {
    if (elements_.empty()) throw ArgumentError("max of an empty set");
    return elements_.back();
}

FiniteSet FiniteSet::prefix(std::size_t count) const {
    count = std::min(count, elements_.size());
    return FiniteSet(std::vector<BigInt>(elements_.begin(), elements_.begin() + count));
}

FiniteSet FiniteSet::at_most(const BigInt& bound) const {
    auto end = std::upper_bound(elements_.begin(), elements_.end(), bound);
    return FiniteSet(std::vector<BigInt>(elements_.begin(), end));
}

bool FiniteSet::contains(const BigInt& n) const {
    return std::binary_search(elements_.begin(), elements_.end(), n);
}

std::vector<std::uint64_t> FiniteSet::to_u64() const {
    std::vector<std::uint64_t> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) {
        if (!fits_u64(e)) throw ResourceError("set element " + e.str() + " exceeds 64 bits");
        out.push_back(sqfree::to_u64(e));
    }
    return out;
}

std::string AvoidanceCertificate::automatic_note() const {
    return "every prime p with p^" + std::to_string(power) + " > " + std::to_string(set_size) +
           " leaves a residue class empty by pigeonhole (" + std::to_string(set_size) +
           " elements cannot occupy p^" + std::to_string(power) + " classes)";
}

std::optional<std::uint64_t> smallest_avoided_residue(const FiniteSet& set, std::uint64_t modulus) {
    if (modulus == 0) throw ArgumentError("modulus must be positive");
    std::vector<std::uint64_t> residues;
    residues.reserve(set.size());
    for (const auto& a : set) residues.push_back(mod_u64(a, modulus));
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    std::uint64_t expect = 0;
    for (std::uint64_t r : residues) {
        if (r != expect) return expect;
        ++expect;
    }
    if (expect < modulus) return expect;
    return std::nullopt;
}

AdmissibilityResult admissibility_certificate(const FiniteSet& set, unsigned k,
                                              std::uint64_t prime_bound) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    const std::uint64_t needed = integer_root(static_cast<std::uint64_t>(set.size()), k);
    if (prime_bound < needed) {
        throw ArgumentError("prime bound " + std::to_string(prime_bound) +
                            " is below |A|^(1/k) = " + std::to_string(needed));
    }
    const PrimeTable table = build_prime_table(prime_bound);
    AvoidanceCertificate cert;
    cert.power = k;
    cert.prime_bound = prime_bound;
    cert.set_size = set.size();
    for (std::uint64_t p : table) {
        auto pk = checked_pow(p, k);
        if (!pk) throw ResourceError("p^k exceeds 64 bits for p = " + std::to_string(p));
        auto b = smallest_avoided_residue(set, *pk);
        if (!b) return NotAdmissible{p};
        cert.explicit_classes.emplace(p, *b);
    }
    return cert;
}

std::optional<SumsViolation> check_squarefree_sums(const FiniteSet& set, bool include_diagonal,
                                                   unsigned k) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (set.empty()) return std::nullopt;
    const BigInt largest_sum = 2 * set.max();
    const BigInt root = integer_root(largest_sum, k);
    if (!fits_u64(root)) throw CoverageError("sums too large to factor: " + largest_sum.str());
    const PrimeTable table = build_prime_table(to_u64(root));

    const auto& e = set.elements();
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t j = include_diagonal ? i : i + 1; j < e.size(); ++j) {
            const BigInt sum = e[i] + e[j];
            if (auto p = smallest_power_divisor_among(sum, k, table.primes)) {
                return SumsViolation{e[i], e[j], *p};
            }
        }
    }
    return std::nullopt;
}

std::map<std::uint64_t, std::uint64_t> property_P_evidence(const FiniteSet& set,
                                                           std::uint64_t n_max, unsigned k) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t n = 1; n <= n_max; ++n) counts[n] = 0;
    if (set.empty() || n_max == 0) return counts;

    const BigInt top = set.max() + n_max;
    const BigInt root = integer_root(top, k);
    if (!fits_u64(root)) throw CoverageError("elements too large to factor: " + top.str());
    const PrimeTable table = build_prime_table(to_u64(root));

    if (fits_u64(top)) {
        const auto elems = set.to_u64();
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            std::uint64_t c = 0;
            for (std::uint64_t a : elems) c += is_power_free(n + a, k, table) ? 1 : 0;
            counts[n] = c;
        }
        return counts;
    }
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        std::uint64_t c = 0;
        for (const auto& a : set) {
            c += smallest_power_divisor_among(a + n, k, table.primes) ? 0 : 1;
        }
        counts[n] = c;
    }
    return counts;
}

}  // namespace sqfree
