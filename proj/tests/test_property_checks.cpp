#include "doctest.h"
#include "oracles.hpp"

#include "sqfree/constructions.hpp"
#include "sqfree/property_checks.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace sqfree;

namespace {

// every a in set: n + a k-free, by factorization
bool oracle_witness(const FiniteSet& set, std::uint64_t n, unsigned k = 2) {
    for (auto a : set.to_u64()) {
        if (!oracle::kfree(n + a, k)) return false;
    }
    return true;
}

bool occupies_all(const std::vector<std::uint64_t>& set, std::uint64_t m) {
    std::set<std::uint64_t> seen;
    for (auto a : set) seen.insert(a % m);
    return seen.size() == m;
}

FiniteSet random_subset(const FiniteSet& set, std::mt19937_64& rng) {
    std::vector<BigInt> out;
    for (const auto& a : set) {
        if (rng() & 1) out.push_back(a);
    }
    return FiniteSet(out);
}

FiniteSet random_set(std::mt19937_64& rng, std::size_t max_size, std::uint64_t bound) {
    std::set<std::uint64_t> s;
    const std::size_t size = rng() % (max_size + 1);
    while (s.size() < size) s.insert(1 + rng() % bound);
    return FiniteSet::from_u64({s.begin(), s.end()});
}

}  // namespace

TEST_CASE("FiniteSet validation") {
    CHECK_THROWS_AS(FiniteSet({3, 2}), ArgumentError);
    CHECK_THROWS_AS(FiniteSet({0, 2}), ArgumentError);
    CHECK_THROWS_AS(FiniteSet({2, 2}), ArgumentError);
    const FiniteSet s{1, 4, 9};
    CHECK(s.max() == 9);
    CHECK(s.prefix(2) == FiniteSet{1, 4});
    CHECK(s.at_most(5) == FiniteSet{1, 4});
    CHECK(s.contains(4));
    CHECK_FALSE(s.contains(5));
}

TEST_CASE("admissibility examples") {
    const auto a1 = admissibility_certificate(FiniteSet{3, 5, 9, 17, 33}, 2, 3);
    const auto* cert = std::get_if<AvoidanceCertificate>(&a1);
    REQUIRE(cert);
    CHECK(cert->explicit_classes.at(2) == 0);
    CHECK(cert->explicit_classes.at(3) == 1);
    CHECK_FALSE(cert->automatic_note().empty());

    const auto blocked = admissibility_certificate(FiniteSet{1, 2, 3, 4}, 2, 2);
    REQUIRE(std::holds_alternative<NotAdmissible>(blocked));
    CHECK(std::get<NotAdmissible>(blocked).prime == 2);

    const auto single = admissibility_certificate(FiniteSet{7}, 2, 2);
    REQUIRE(std::holds_alternative<AvoidanceCertificate>(single));
    CHECK(std::get<AvoidanceCertificate>(single).explicit_classes.at(2) == 0);

    CHECK_THROWS_AS(admissibility_certificate(FiniteSet{1, 2, 3, 4, 5}, 2, 1), ArgumentError);
    CHECK(smallest_avoided_residue(FiniteSet{1, 2, 3, 4}, 4) == std::nullopt);
    CHECK(smallest_avoided_residue(FiniteSet{1, 2, 4}, 4) == 3);
}

TEST_CASE("admissibility: soundness and completeness for |A| <= 30") {
    std::mt19937_64 rng(11);
    int blocked_seen = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const FiniteSet s = random_set(rng, 30, trial % 2 ? 40 : 400);
        const auto values = s.to_u64();
        const unsigned k = trial % 5 == 0 ? 3 : 2;
        const std::uint64_t bound = std::max<std::uint64_t>(2, integer_root(s.size(), k));
        const auto result = admissibility_certificate(s, k, bound);

        std::optional<std::uint64_t> expected;
        for (std::uint64_t p = 2; oracle::ipow(p, k) <= s.size(); ++p) {
            if (oracle::is_prime(p) && occupies_all(values, oracle::ipow(p, k))) {
                expected = p;
                break;
            }
        }
        if (expected) {
            ++blocked_seen;
            REQUIRE(std::holds_alternative<NotAdmissible>(result));
            REQUIRE(std::get<NotAdmissible>(result).prime == *expected);
            continue;
        }
        REQUIRE(std::holds_alternative<AvoidanceCertificate>(result));
        for (auto [p, b] : std::get<AvoidanceCertificate>(result).explicit_classes) {
            const std::uint64_t m = oracle::ipow(p, k);
            REQUIRE(b < m);
            for (auto a : values) REQUIRE(a % m != b);
            for (std::uint64_t r = 0; r < b; ++r) {
                REQUIRE(std::any_of(values.begin(), values.end(), [&](auto a) { return a % m == r; }));
            }
        }
    }
    CHECK(blocked_seen > 0);
}

TEST_CASE("admissibility is downward monotone") {
    std::mt19937_64 rng(5);
    const FiniteSet base = named_sequence_prefix(SequenceTag::A1, 20);
    for (int trial = 0; trial < 200; ++trial) {
        const FiniteSet sub = random_subset(base, rng);
        const auto r = admissibility_certificate(sub, 2, 5);
        REQUIRE(std::holds_alternative<AvoidanceCertificate>(r));
    }
}

TEST_CASE("named sequence terms") {
    CHECK(named_sequence_term(SequenceTag::A1, 5) == 33);
    CHECK(named_sequence_term(SequenceTag::A3, 4) == 25);
    CHECK(named_sequence_term(SequenceTag::A4, 2) == 1);
    CHECK(named_sequence_term(SequenceTag::A2, 3) == 7);
    CHECK_THROWS_AS(named_sequence_term(SequenceTag::A4, 1), ArgumentError);
    CHECK_THROWS_AS(named_sequence_term(SequenceTag::A1, 0), ArgumentError);
    CHECK(named_sequence_prefix(SequenceTag::A1, 5) == FiniteSet{3, 5, 9, 17, 33});
    CHECK(named_sequence_prefix(SequenceTag::A3, 5) == FiniteSet{2, 3, 7, 25, 121});
    CHECK(named_sequence_prefix(SequenceTag::A4, 5) == FiniteSet{1, 5, 23, 119, 719});
    CHECK(named_sequence_term(SequenceTag::A3, 30) ==
          BigInt("265252859812191058636308480000000") + 1);
    CHECK(parse_sequence_tag("A2") == SequenceTag::A2);
    CHECK_THROWS_AS(parse_sequence_tag("A5"), ArgumentError);
}

TEST_CASE("named sequence certificates") {
    CHECK(named_sequence_certificate(SequenceTag::A2, 2) == ResidueClass(2, 4));
    CHECK(named_sequence_certificate(SequenceTag::A2, 3) == ResidueClass(8, 9));
    CHECK(named_sequence_certificate(SequenceTag::A3, 3) == ResidueClass(0, 9));
    CHECK(named_sequence_certificate(SequenceTag::A1, 2) == ResidueClass(0, 4));
    CHECK(named_sequence_certificate(SequenceTag::A1, 7) == ResidueClass(1, 49));
    CHECK_THROWS_AS(named_sequence_certificate(SequenceTag::A1, 9), ArgumentError);

    // the certified class misses a long stretch of every sequence
    for (auto tag : {SequenceTag::A1, SequenceTag::A2, SequenceTag::A3, SequenceTag::A4}) {
        for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
            const auto c = named_sequence_certificate(tag, p);
            for (std::uint64_t j = first_index(tag); j < 80; ++j) {
                REQUIRE_FALSE(c.contains(named_sequence_term(tag, j)));
            }
        }
    }
}

TEST_CASE("translate witness examples") {
    auto w = find_translate_witness(FiniteSet{1, 3}, 1, 100, 2);
    REQUIRE(w);
    CHECK(w->witness == 2);
    CHECK(w->certification == Certification::Full);

    w = find_translate_witness(FiniteSet{3, 5}, 1, 100, 2);
    REQUIRE(w);
    CHECK(w->witness == 2);

    CHECK_FALSE(find_translate_witness(FiniteSet{1, 2, 3, 4}, 1, 10000, 2));

    w = find_translate_witness(FiniteSet{3, 5, 9}, 5, 9, 2);
    REQUIRE(w);
    CHECK(w->witness == 8);

    w = find_translate_witness(FiniteSet{1, 3}, 100, 200, 2, 2);
    REQUIRE(w);
    CHECK(w->certification == Certification::PiCertified);
    CHECK(w->prime_cutoff == 2);
}

TEST_CASE("translate witnesses re-verify and are minimal") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const FiniteSet s = random_set(rng, 8, 500);
        const std::uint64_t lo = 1 + rng() % 1000;
        const std::uint64_t hi = lo + rng() % 2000;
        const auto w = find_translate_witness(s, lo, hi, 2);
        std::optional<std::uint64_t> naive;
        for (std::uint64_t n = lo; n <= hi && !naive; ++n) {
            if (oracle_witness(s, n)) naive = n;
        }
        REQUIRE(bool(w) == bool(naive));
        if (!w) continue;
        REQUIRE(w->witness == *naive);
        REQUIRE(w->certification == Certification::Full);
        for (const auto& e : w->trace) {
            REQUIRE(e.shifted == e.element + w->witness);
            REQUIRE_FALSE(e.blocking_prime);
            REQUIRE(oracle::kfree(to_u64(e.shifted)));
        }
    }
}

TEST_CASE("check_Q_prefix examples") {
    auto w = check_Q_prefix(SequenceTag::A1, 3);
    REQUIRE(w);
    CHECK(w->witness == 8);
    CHECK(w->certification == Certification::Full);

    w = check_Q_prefix(SequenceTag::A1, 2);
    REQUIRE(w);
    CHECK(w->witness == 4);

    w = check_Q_prefix(SequenceTag::A2, 3);
    REQUIRE(w);
    CHECK(w->witness == 4);

    CHECK_THROWS_AS(check_Q_prefix(FiniteSet{1, 2, 3, 4, 5, 100}, 6), NotAdmissibleError);
    try {
        check_Q_prefix(FiniteSet{1, 2, 3, 4, 5, 100}, 6);
    } catch (const NotAdmissibleError& e) {
        CHECK(e.prime() == 2);
    }
    CHECK_THROWS_AS(check_Q_prefix(SequenceTag::A1, 1), ArgumentError);
}

TEST_CASE("check_Q_prefix strategies agree with the oracle on A1") {
    for (std::size_t j = 2; j <= 15; ++j) {
        const FiniteSet terms = named_sequence_prefix(SequenceTag::A1, j);
        const FiniteSet prefix = terms.prefix(j - 1);
        for (auto strategy : {QStrategy::PlainScan, QStrategy::HalfInterval, QStrategy::Crt}) {
            QPrefixOptions options;
            options.strategy = strategy;
            const auto w = check_Q_prefix(terms, j, options);
            REQUIRE(w);
            REQUIRE(w->certification == Certification::Full);
            const std::uint64_t n = to_u64(w->witness);
            REQUIRE(oracle_witness(prefix, n));
            const std::uint64_t aj = to_u64(terms[j - 1]);
            if (strategy == QStrategy::PlainScan) {
                REQUIRE(n > to_u64(terms[j - 2]));
                REQUIRE(n < aj);
            } else {
                REQUIRE(2 * n >= aj);
                REQUIRE(n <= aj);
            }
        }
    }
}

TEST_CASE("squarefree sums examples") {
    auto v = check_squarefree_sums(FiniteSet{3, 5}, true);
    REQUIRE(v);
    CHECK(*v == SumsViolation{3, 5, 2});
    v = check_squarefree_sums(FiniteSet{3, 5}, false);
    REQUIRE(v);
    CHECK(*v == SumsViolation{3, 5, 2});

    v = check_squarefree_sums(FiniteSet{1, 2}, true);
    REQUIRE(v);
    CHECK(*v == SumsViolation{2, 2, 2});
    CHECK_FALSE(check_squarefree_sums(FiniteSet{1, 2}, false));
    CHECK_FALSE(check_squarefree_sums(FiniteSet{1, 5, 21}, true));
    CHECK_FALSE(check_squarefree_sums(FiniteSet{}, true));
}

TEST_CASE("squarefree sums agree with a naive double loop") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        const FiniteSet s = random_set(rng, 6, 10000);
        const bool diagonal = trial % 2;
        const auto values = s.to_u64();
        std::optional<SumsViolation> naive;
        for (std::size_t i = 0; i < values.size() && !naive; ++i) {
            for (std::size_t j = diagonal ? i : i + 1; j < values.size() && !naive; ++j) {
                if (auto p = oracle::smallest_kth_power_prime(values[i] + values[j])) {
                    naive = SumsViolation{values[i], values[j], *p};
                }
            }
        }
        REQUIRE(check_squarefree_sums(s, diagonal) == naive);
    }
}

TEST_CASE("squarefree sums are downward monotone") {
    std::mt19937_64 rng(29);
    const auto greedy = greedy_squarefree_sums(25, true);
    const FiniteSet base = FiniteSet::from_u64(greedy.terms);
    REQUIRE_FALSE(check_squarefree_sums(base, true));
    for (int trial = 0; trial < 200; ++trial) {
        REQUIRE_FALSE(check_squarefree_sums(random_subset(base, rng), true));
    }
}

TEST_CASE("property_P_evidence") {
    const auto one = property_P_evidence(FiniteSet{1}, 3);
    CHECK(one == std::map<std::uint64_t, std::uint64_t>{{1, 1}, {2, 1}, {3, 0}});
    const auto empty = property_P_evidence(FiniteSet{}, 5);
    CHECK(empty.size() == 5);
    for (auto [n, c] : empty) CHECK(c == 0);

    PropertyPConfig cfg;
    cfg.count = 50;
    const auto seq = property_P_sequence(cfg);
    const FiniteSet prefix = FiniteSet::from_u64(seq.terms);
    const auto ev = property_P_evidence(prefix, 40);
    CHECK(ev.at(1) == 3);
    for (auto [n, c] : ev) {
        std::uint64_t naive = 0;
        for (auto a : seq.terms) naive += oracle::kfree(n + a);
        REQUIRE(c == naive);
    }
}
