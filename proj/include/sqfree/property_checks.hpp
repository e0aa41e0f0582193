// property_checks.hpp
// Deciding and certifying translate properties of finite sets: admissibility
// certificates, translate witnesses (n + a k-free for every a), squarefree
// sums, and count tables probing property P.

#pragma once

#include "sqfree/errors.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/sieve_core.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sqfree {

// A strictly increasing list of naturals >= 1.
class FiniteSet {
public:
    FiniteSet() = default;
    explicit FiniteSet(std::vector<BigInt> elements);
    FiniteSet(std::initializer_list<std::uint64_t> elements);
    static FiniteSet from_u64(const std::vector<std::uint64_t>& elements);

    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    const BigInt& operator[](std::size_t i) const { return elements_.at(i); }
    const BigInt& max() const;
    const std::vector<BigInt>& elements() const noexcept { return elements_; }
    auto begin() const noexcept { return elements_.begin(); }
    auto end() const noexcept { return elements_.end(); }

    // The first `count` elements, and the elements <= bound.
    FiniteSet prefix(std::size_t count) const;
    FiniteSet at_most(const BigInt& bound) const;

    bool contains(const BigInt& n) const;
    std::vector<std::uint64_t> to_u64() const;

    friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

private:
    std::vector<BigInt> elements_;
};

// Smallest avoided residue modulo p^k for every prime p up to prime_bound.
// Any prime with p^k > set_size avoids some class automatically.
struct AvoidanceCertificate {
    unsigned power = 2;
    std::map<std::uint64_t, std::uint64_t> explicit_classes;  // p -> b_p (mod p^k)
    std::uint64_t prime_bound = 0;
    std::uint64_t set_size = 0;

    // Describes the pigeonhole argument covering every prime without an entry.
    std::string automatic_note() const;
};

struct NotAdmissible {
    std::uint64_t prime;
};

using AdmissibilityResult = std::variant<AvoidanceCertificate, NotAdmissible>;

// Explicit classes for every prime p <= prime_bound. NotAdmissible(p) names
// the smallest prime whose p^k classes are all occupied (only possible when
// p^k <= |A|). Requires prime_bound >= |A|^(1/k).
AdmissibilityResult admissibility_certificate(const FiniteSet& set, unsigned k,
                                              std::uint64_t prime_bound);

// Smallest r in [0, m) not congruent to any element; nullopt if all occupied.
std::optional<std::uint64_t> smallest_avoided_residue(const FiniteSet& set, std::uint64_t modulus);

// ---------------------------------------------------------------------------
// The four test sequences 2^j + 1, 2^j - 1, j! + 1 and j! - 1.

enum class SequenceTag { A1, A2, A3, A4 };

std::string to_string(SequenceTag tag);
SequenceTag parse_sequence_tag(const std::string& token);

// Smallest valid index (1, or 2 for A4).
std::uint64_t first_index(SequenceTag tag);

BigInt named_sequence_term(SequenceTag tag, std::uint64_t j);

// The first `count` terms as a FiniteSet.
FiniteSet named_sequence_prefix(SequenceTag tag, std::size_t count);

// A class modulo p^k that the whole infinite sequence avoids. The named class
// from the closed form is used where one exists (A1: 0 mod 2^k, 1 mod p^k;
// A2: 2 mod 2^k, -1 mod p^k; A3/A4: 0 mod 2^k); for A3/A4 at odd p the
// smallest avoided residue of the eventually-constant orbit is returned.
// Either way the answer is checked against the complete residue orbit.
ResidueClass named_sequence_certificate(SequenceTag tag, std::uint64_t p, unsigned k = 2);

// Every residue modulo m taken by the infinite sequence.
std::vector<bool> named_sequence_residues(SequenceTag tag, std::uint64_t modulus);

// ---------------------------------------------------------------------------
// Translate witnesses.

enum class Certification {
    Full,         // every prime p with p^k <= n + a was checked
    PiCertified,  // only primes p <= cutoff were checked
};

std::string to_string(Certification c);

struct TraceEntry {
    BigInt element;
    BigInt shifted;                              // n + a
    std::optional<std::uint64_t> blocking_prime; // smallest p <= cutoff with p^k | n + a
};

struct WitnessReport {
    BigInt witness;
    Certification certification = Certification::Full;
    std::uint64_t prime_cutoff = 0;
    unsigned power = 2;
    std::vector<TraceEntry> trace;
};

// Cutoff that makes a search over [.., hi] against `set` fully certified.
std::uint64_t full_prime_cutoff(const FiniteSet& set, std::uint64_t hi, unsigned k);

// Builds the per-element trace for n against `set` using primes <= cutoff.
WitnessReport certify_witness(const FiniteSet& set, const BigInt& n, unsigned k,
                              std::uint64_t prime_cutoff, const PrimeTable& table);

// Smallest n in [lo, hi] with p^k not dividing n + a for every a in the set
// and every prime p <= cutoff. With no cutoff the full cutoff is used.
std::optional<WitnessReport> find_translate_witness(const FiniteSet& set, std::uint64_t lo,
                                                    std::uint64_t hi, unsigned k,
                                                    std::optional<std::uint64_t> prime_cutoff = {});

enum class QStrategy {
    PlainScan,     // n in (a_{j-1}, a_j)
    HalfInterval,  // n in [a_j / 2, a_j]
    Crt,           // CRT-restricted scan of [a_j / 2, a_j]
};

std::string to_string(QStrategy s);
QStrategy parse_q_strategy(const std::string& token);

struct QPrefixOptions {
    QStrategy strategy = QStrategy::PlainScan;
    std::optional<std::uint64_t> prime_cutoff;
    unsigned power = 2;
    double theta = 0.1;  // only used by QStrategy::Crt
};

// Searches for n with n + a_i k-free for all i < j, where `terms` holds at
// least a_1..a_j (1-based j >= 2). Throws NotAdmissibleError naming the
// blocking prime when a_1..a_{j-1} fills every class modulo some p^k.
std::optional<WitnessReport> check_Q_prefix(const FiniteSet& terms, std::size_t j,
                                            const QPrefixOptions& options = {});
std::optional<WitnessReport> check_Q_prefix(SequenceTag tag, std::size_t j,
                                            const QPrefixOptions& options = {});

// ---------------------------------------------------------------------------

struct SumsViolation {
    BigInt first;
    BigInt second;
    std::uint64_t prime;
    friend bool operator==(const SumsViolation&, const SumsViolation&) = default;
};

// nullopt when every pairwise sum (a = a' included iff include_diagonal) is
// k-free; otherwise the lexicographically first violating pair and the
// smallest prime whose k-th power divides the sum.
std::optional<SumsViolation> check_squarefree_sums(const FiniteSet& set, bool include_diagonal,
                                                   unsigned k = 2);

// For n = 1..n_max: |{a in set : n + a k-free}|.
std::map<std::uint64_t, std::uint64_t> property_P_evidence(const FiniteSet& set,
                                                           std::uint64_t n_max, unsigned k = 2);

}  // namespace sqfree
