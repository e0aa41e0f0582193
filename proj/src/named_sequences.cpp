#include "sqfree/property_checks.hpp"

#include <algorithm>
#include <cctype>

namespace sqfree {

namespace {

// Residue orbits are held in a bitmap of the full modulus.
constexpr std::uint64_t kMaxOrbitModulus = std::uint64_t{1} << 28;

bool is_small_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

BigInt factorial(std::uint64_t j) {
    BigInt f = 1;
    for (std::uint64_t i = 2; i <= j; ++i) f *= i;
    return f;
}

bool is_power_of_two_sequence(SequenceTag tag) {
    return tag == SequenceTag::A1 || tag == SequenceTag::A2;
}

int offset_of(SequenceTag tag) {
    return (tag == SequenceTag::A1 || tag == SequenceTag::A3) ? 1 : -1;
}

}  // namespace

std::string to_string(SequenceTag tag) {
    switch (tag) {
        case SequenceTag::A1: return "A1";
        case SequenceTag::A2: return "A2";
        case SequenceTag::A3: return "A3";
        case SequenceTag::A4: return "A4";
    }
    return "?";
}

SequenceTag parse_sequence_tag(const std::string& token) {
    std::string t = token;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
    if (t == "A1") return SequenceTag::A1;
    if (t == "A2") return SequenceTag::A2;
    if (t == "A3") return SequenceTag::A3;
    if (t == "A4") return SequenceTag::A4;
    throw ArgumentError("unknown sequence tag '" + token + "' (expected A1..A4)");
}

std::uint64_t first_index(SequenceTag tag) { return tag == SequenceTag::A4 ? 2 : 1; }

BigInt named_sequence_term(SequenceTag tag, std::uint64_t j) {
    if (j < first_index(tag)) {
        throw ArgumentError("index " + std::to_string(j) + " outside the domain of " +
                            to_string(tag));
    }
    BigInt base;
    if (is_power_of_two_sequence(tag)) {
        base = BigInt(1) << j;
    } else {
        base = factorial(j);
    }
    return base + offset_of(tag);
}

FiniteSet named_sequence_prefix(SequenceTag tag, std::size_t count) {
    std::vector<BigInt> terms;
    terms.reserve(count);
    for (std::uint64_t j = first_index(tag); terms.size() < count; ++j) {
        terms.push_back(named_sequence_term(tag, j));
    }
    return FiniteSet(std::move(terms));
}

std::vector<bool> named_sequence_residues(SequenceTag tag, std::uint64_t modulus) {
    if (modulus == 0) throw ArgumentError("modulus must be positive");
    if (modulus > kMaxOrbitModulus) {
        throw ResourceError("residue orbit modulus " + std::to_string(modulus) + " too large");
    }
    std::vector<bool> occupied(modulus, false);
    const std::uint64_t m = modulus;
    const std::uint64_t shift = offset_of(tag) > 0 ? 1 : m - 1;  // +1 or -1 mod m
    auto mark = [&](std::uint64_t base) { occupied[(base % m + shift % m) % m] = true; };

    if (is_power_of_two_sequence(tag)) {
        // 2^j mod m for j >= 1 is eventually periodic; stop at the first repeat.
        std::vector<bool> seen(m, false);
        std::uint64_t s = 2 % m;
        while (!seen[s]) {
            seen[s] = true;
            mark(s);
            s = static_cast<std::uint64_t>((static_cast<unsigned __int128>(s) * 2) % m);
        }
    } else {
        // j! mod m reaches 0 by j = m at the latest and stays there.
        std::uint64_t f = 1 % m;
        for (std::uint64_t j = 1; j <= m + 1; ++j) {
            f = static_cast<std::uint64_t>((static_cast<unsigned __int128>(f) * (j % m)) % m);
            if (j >= first_index(tag)) mark(f);
            if (f == 0) break;
        }
    }
    return occupied;
}

ResidueClass named_sequence_certificate(SequenceTag tag, std::uint64_t p, unsigned k) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    if (!is_small_prime(p)) throw ArgumentError(std::to_string(p) + " is not prime");
    auto pk = checked_pow(p, k);
    if (!pk) throw ResourceError("p^k exceeds 64 bits");
    const std::uint64_t m = *pk;
    const auto occupied = named_sequence_residues(tag, m);

    std::optional<std::uint64_t> b;
    switch (tag) {
        case SequenceTag::A1: b = (p == 2) ? 0 : 1; break;
        case SequenceTag::A2: b = (p == 2) ? 2 : m - 1; break;
        case SequenceTag::A3:
        case SequenceTag::A4:
            if (p == 2) {
                b = 0;
            } else {
                auto it = std::find(occupied.begin(), occupied.end(), false);
                if (it != occupied.end()) b = static_cast<std::uint64_t>(it - occupied.begin());
            }
            break;
    }
    if (!b || occupied[*b]) {
        throw std::logic_error("closed-form certificate for " + to_string(tag) +
                               " contradicts the residue orbit modulo " + std::to_string(m));
    }
    return ResidueClass(*b, m);
}

}  // namespace sqfree
