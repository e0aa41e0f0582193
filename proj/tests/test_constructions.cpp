#include "doctest.h"
#include "oracles.hpp"

#include "sqfree/constructions.hpp"

#include <cmath>
#include <numeric>

using namespace sqfree;

namespace {

std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; out.size() < count; ++n) {
        if (oracle::is_prime(n)) out.push_back(n);
    }
    return out;
}

// conditions (a) and (b) by direct trial division over every relevant prime
bool overp_oracle(const BigInt& n, std::uint64_t P) {
    for (std::uint64_t p = 2; p <= P; ++p) {
        if (oracle::is_prime(p) && n % (p * p) != 0) return false;
    }
    for (std::uint64_t p = P + 1;; ++p) {
        if (!oracle::is_prime(p)) continue;
        if (p < 5) continue;
        const double ll = std::log(std::log(double(p)));
        const auto limit = static_cast<std::uint64_t>(std::floor(double(p) / (ll * ll)));
        if (BigInt(p) * p > n + limit) break;
        const std::uint64_t r = static_cast<std::uint64_t>(n % (p * p));
        for (std::uint64_t a = 1; a <= limit; ++a) {
            if ((r + a) % (p * p) == 0) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("growth functions") {
    CHECK(parse_growth("identity").eval(7) == 7);
    CHECK(parse_growth("linear:3").eval(7) == 21);
    CHECK(parse_growth("const:4").eval(100) == 4);
    CHECK(parse_growth("jlogj").eval(1) == 1);
    CHECK(parse_growth("jlogj").eval(10) == 30);
    CHECK_THROWS_AS(parse_growth("linear:x"), ArgumentError);
    CHECK_THROWS_AS(parse_growth("cubic"), ArgumentError);
}

TEST_CASE("property P sequence examples") {
    PropertyPConfig cfg;
    cfg.count = 36;
    const auto seq = property_P_sequence(cfg);
    REQUIRE(seq.terms.size() == 36);
    CHECK(std::vector<std::uint64_t>(seq.terms.begin(), seq.terms.begin() + 6) ==
          std::vector<std::uint64_t>{1, 2, 3, 4, 7, 11});
    CHECK(seq.terms[34] == 127);
    CHECK(seq.terms[35] == 151);
    REQUIRE(seq.levels.size() >= 3);
    CHECK(seq.levels[0] == 4);
    CHECK(seq.levels[1] == 36);
    CHECK(seq.levels[2] == 900);
    CHECK(seq.moduli[0] == 4);
    CHECK(seq.moduli[1] == 36);
    CHECK(seq.level_of(3) == 0);
    CHECK(seq.level_of(4) == 1);
    CHECK(seq.level_of(36) == 2);

    PropertyPConfig flat;
    flat.count = 10;
    flat.f = growth_constant(1);
    CHECK_THROWS_AS(property_P_sequence(flat), BudgetError);
}

TEST_CASE("property P sequence invariants") {
    for (const char* token : {"identity", "linear:2", "jlogj"}) {
        PropertyPConfig cfg;
        cfg.count = 200;
        cfg.f = parse_growth(token);
        const auto seq = property_P_sequence(cfg);
        const auto primes = first_primes(10);
        REQUIRE(seq.terms.size() == 200);
        for (std::uint64_t j = 1; j <= 200; ++j) {
            const std::uint64_t a = seq.terms[j - 1];
            if (j > 1) REQUIRE(a > seq.terms[j - 2]);
            REQUIRE(a <= j * cfg.f.eval(j));
            if (j <= seq.levels[0]) REQUIRE(a == j);
            // a_j = j up to and including l_1; the congruences take over after it
            for (std::size_t r = 1; r <= seq.levels.size() && j > seq.levels[0]; ++r) {
                if (j < seq.levels[r - 1]) break;
                REQUIRE((a + r) % (primes[r - 1] * primes[r - 1]) == 0);
            }
        }
        // minimality: nothing between consecutive terms satisfies the congruences
        for (std::uint64_t j = 2; j <= 200; ++j) {
            const std::size_t level = seq.level_of(j);
            for (std::uint64_t c = seq.terms[j - 2] + 1; c < seq.terms[j - 1]; ++c) {
                bool ok = true;
                for (std::size_t r = 1; r <= level; ++r) ok = ok && (c + r) % (primes[r - 1] * primes[r - 1]) == 0;
                REQUIRE_FALSE(ok);
            }
        }
    }
}

TEST_CASE("greedy squarefree sums") {
    CHECK(greedy_squarefree_sums(3, true).terms == std::vector<std::uint64_t>{1, 5, 21});
    CHECK(greedy_squarefree_sums(1, true).terms == std::vector<std::uint64_t>{1});
    CHECK(greedy_squarefree_sums(2, false).terms == std::vector<std::uint64_t>{1, 2});
    CHECK(greedy_squarefree_sums(0, true).terms.empty());

    const auto g = greedy_squarefree_sums(30, true);
    REQUIRE(g.terms.size() == 30);
    CHECK(g.terms[29] == 1081);
    for (std::size_t i = 0; i < g.terms.size(); ++i) {
        for (std::size_t j = i; j < g.terms.size(); ++j) REQUIRE(oracle::kfree(g.terms[i] + g.terms[j]));
    }
    for (std::size_t m = 1; m <= g.terms.size(); ++m) {
        const FiniteSet prefix = FiniteSet::from_u64({g.terms.begin(), g.terms.begin() + m});
        REQUIRE_FALSE(check_squarefree_sums(prefix, true));
    }
    // every skipped candidate is accounted for by a concrete violation
    std::uint64_t expected_skips = 0;
    for (std::size_t i = 1; i < g.terms.size(); ++i) expected_skips += g.terms[i] - g.terms[i - 1] - 1;
    expected_skips += g.terms[0] - 1;
    CHECK(g.skipped.size() == expected_skips);
    for (const auto& s : g.skipped) {
        REQUIRE(oracle::ipow(s.prime, 2) > 0);
        REQUIRE((s.candidate + s.partner) % (s.prime * s.prime) == 0);
        REQUIRE(oracle::smallest_kth_power_prime(s.candidate + s.partner) == s.prime);
        REQUIRE((s.partner == s.candidate ||
                 std::find(g.terms.begin(), g.terms.end(), s.partner) != g.terms.end()));
    }

    const auto off = greedy_squarefree_sums(30, false);
    for (std::size_t i = 0; i < off.terms.size(); ++i) {
        for (std::size_t j = i + 1; j < off.terms.size(); ++j) REQUIRE(oracle::kfree(off.terms[i] + off.terms[j]));
    }
}

TEST_CASE("suff witness search examples") {
    auto r = suff_witness_search(FiniteSet{3, 5, 9}, 9);
    REQUIRE(r.witness);
    CHECK(r.witness->witness == 8);
    CHECK(r.modulus == 1);

    r = suff_witness_search(FiniteSet{}, 10);
    REQUIRE(r.witness);
    CHECK(r.witness->witness == 5);

    const FiniteSet a1 = named_sequence_prefix(SequenceTag::A1, 15);
    r = suff_witness_search(a1, 32769);
    REQUIRE(r.witness);
    CHECK(r.interval_lo == 16385);
    CHECK(r.interval_hi == 32769);
    const std::uint64_t n = to_u64(r.witness->witness);
    CHECK(n >= 16385);
    CHECK(n <= 32769);
    CHECK(r.witness->certification == Certification::Full);
    CHECK(BigInt(n) % r.modulus == r.residue);
    for (const auto& e : r.witness->trace) CHECK(oracle::kfree(to_u64(e.shifted)));

    SuffSearchConfig bad;
    bad.theta = 0.3;
    CHECK_THROWS_AS(suff_witness_search(a1, 32769, bad), ArgumentError);
    CHECK_THROWS_AS(suff_witness_search(FiniteSet{1, 2, 3, 4}, 1'000'000'000), ArgumentError);
}

TEST_CASE("suff witness search invariants") {
    for (std::size_t count = 3; count <= 20; ++count) {
        const FiniteSet a1 = named_sequence_prefix(SequenceTag::A1, count);
        const std::uint64_t x = to_u64(a1.max());
        for (auto mode : {IntervalMode::Half, IntervalMode::Forward}) {
            for (auto order : {ScanOrder::Ascending, ScanOrder::SeededRandom}) {
                SuffSearchConfig cfg;
                cfg.mode = mode;
                cfg.order = order;
                cfg.seed = count;
                const auto r = suff_witness_search(a1, x, cfg);
                REQUIRE(r.witness);
                const std::uint64_t n = to_u64(r.witness->witness);
                REQUIRE(n >= r.interval_lo);
                REQUIRE(n <= r.interval_hi);
                REQUIRE(BigInt(n) % r.modulus == r.residue);
                for (auto a : a1.to_u64()) REQUIRE(oracle::kfree(n + a));
            }
        }
    }
}

TEST_CASE("dense Q steps") {
    DenseQConfig cfg;
    cfg.initial_anchor = 2;
    DenseQState state = dense_Q_step(DenseQState{}, cfg);
    REQUIRE(state.anchors == std::vector<std::uint64_t>{2});

    cfg.x = 10000;
    state = dense_Q_step(state, cfg);
    REQUIRE(state.anchors.size() == 2);
    CHECK(state.anchors[1] == 5004);
    CHECK(state.anchors[1] % 36 == 0);
    CHECK(state.slices.back().lo == 2);
    CHECK(state.slices.back().hi == 5004);
    const auto members = slice_members(state.slices.back(), 2, 20);
    for (auto a : members) {
        CHECK(a > 2);
        CHECK(oracle::kfree(a));
        CHECK(oracle::kfree(5004 + a));
    }

    DenseQConfig four;
    four.initial_anchor = 4;
    DenseQState s4 = dense_Q_step(DenseQState{}, four);
    four.x = 1'000'000;
    CHECK_THROWS_AS(dense_Q_step(s4, four), ArgumentError);
    four.x = 10'000'000'000ull;
    s4 = dense_Q_step(s4, four);
    REQUIRE(s4.anchors.size() == 2);
    const std::uint64_t W = 30030ull * 30030ull;
    CHECK(s4.anchors[1] % W == 0);
    CHECK(s4.anchors[1] >= 2 * 4);
    for (std::uint64_t a : {1, 2, 3}) CHECK(oracle::kfree(s4.anchors[1] + a));

    DenseQConfig eps;
    eps.epsilon = 1.5;
    eps.x = 10000;
    CHECK_THROWS_AS(dense_Q_step(state, eps), ArgumentError);
}

TEST_CASE("dense Q steps keep (i) exactly and the spacing") {
    for (auto order : {ScanOrder::Ascending, ScanOrder::SeededRandom}) {
        for (std::uint64_t n1 : {1, 2, 3}) {
            DenseQConfig cfg;
            cfg.initial_anchor = n1;
            DenseQState state = dense_Q_step(DenseQState{}, cfg);
            cfg.x = 100000;
            cfg.order = order;
            cfg.seed = 9 + n1;
            state = dense_Q_step(state, cfg);
            const std::uint64_t n = state.anchors[0], next = state.anchors[1];
            REQUIRE(next >= 2 * n);
            REQUIRE(2 * next >= cfg.x);
            REQUIRE(next <= cfg.x);
            for (std::uint64_t a = 1; a <= n; ++a) {
                if (oracle::kfree(a)) REQUIRE(oracle::kfree(next + a));
            }
            REQUIRE_FALSE(state.grids.back().empty());
        }
    }
}

TEST_CASE("sampler") {
    CHECK(sampler_probability(3, 5.0) == doctest::Approx(5 * std::log(3.0) * std::log(std::log(3.0)) / 3));
    CHECK(sampler_probability(3, 5.0) == doctest::Approx(0.172).epsilon(0.01));
    CHECK(sampler_probability(3, 100.0) == 1.0);
    CHECK_THROWS_AS(sampler_probability(2, 5.0), ArgumentError);

    SamplerConfig cfg;
    cfg.C = 100;
    cfg.x_max = 1000;
    cfg.seed = 1;
    CHECK(sample_counterexample(cfg).contains(3));

    cfg.C = 5;
    cfg.x_max = 20000;
    const FiniteSet a = sample_counterexample(cfg);
    const FiniteSet b = sample_counterexample(cfg);
    CHECK(a == b);
    for (auto n : a.to_u64()) {
        REQUIRE(n >= 3);
        REQUIRE(oracle::kfree(n));
    }
    cfg.seed = 2;
    CHECK_FALSE(sample_counterexample(cfg) == a);
    CHECK(keyed_uniform(1, 5) == keyed_uniform(1, 5));
    CHECK(keyed_uniform(1, 5) >= 0.0);
    CHECK(keyed_uniform(1, 5) < 1.0);
}

TEST_CASE("sampler mean over 200 seeds") {
    SamplerConfig cfg;
    cfg.C = 5;
    cfg.x_max = 100000;
    double expected = 0;
    for (std::uint64_t n = 3; n <= cfg.x_max; ++n) {
        if (oracle::kfree(n)) {
            const double ln = std::log(double(n));
            expected += std::min(5 * ln * std::log(ln) / double(n), 1.0);
        }
    }
    CHECK(expected_sample_size(cfg) == doctest::Approx(expected).epsilon(1e-9));
    double total = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        cfg.seed = seed;
        total += double(sample_counterexample(cfg).size());
    }
    CHECK(std::abs(total / 200 - expected) <= 0.05 * expected);
}

TEST_CASE("occupancy probe") {
    std::vector<std::uint64_t> sf;
    for (std::uint64_t n = 1; n <= 100; ++n) {
        if (oracle::kfree(n)) sf.push_back(n);
    }
    auto rows = occupancy_probe(FiniteSet::from_u64(sf), 100);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].prime == 2);
    CHECK(rows[0].unoccupied_nonzero.empty());
    CHECK(rows[1].prime == 3);
    CHECK(rows[1].unoccupied_nonzero.empty());

    rows = occupancy_probe(FiniteSet{3}, 100);
    CHECK(rows[0].unoccupied_nonzero == std::vector<std::uint64_t>{1, 2});
    CHECK(rows[1].unoccupied_nonzero == std::vector<std::uint64_t>{1, 2, 4, 5, 6, 7, 8});

    rows = occupancy_probe(FiniteSet{}, 100);
    CHECK(rows[0].unoccupied_nonzero == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(rows[1].unoccupied_nonzero.size() == 8);
}

TEST_CASE("over-P base points") {
    CHECK(overp_shift_limit(5) == 22);
    CHECK(overp_shift_limit(7) == 15);
    CHECK_THROWS_AS(overp_shift_limit(3), ArgumentError);

    OverPConfig cfg;
    cfg.threshold = 3;
    const auto p3 = overP_base_point(cfg);
    CHECK(p3.n == 252);
    CHECK(p3.modulus == 36);
    CHECK(p3.fully_verified);
    CHECK(overp_oracle(p3.n, 3));
    for (std::uint64_t m = 36; m < 252; m += 36) {
        CHECK_FALSE(overp_oracle(m, 3));
        CHECK(overp_first_failure(m, 3, 2, 1000) == 5);
    }
    CHECK_FALSE(overp_first_failure(252, 3, 2, 1000));

    cfg.candidate_budget = 1;
    CHECK_THROWS_AS(overP_base_point(cfg), BudgetError);

    OverPConfig five;
    five.threshold = 5;
    const auto p5 = overP_base_point(five);
    CHECK(p5.n % 900 == 0);
    CHECK(p5.fully_verified);
    CHECK(overp_oracle(p5.n, 5));

    OverPConfig seven;
    seven.threshold = 7;
    const auto p7 = overP_base_point(seven);
    CHECK(overp_oracle(p7.n, 7));
    CHECK_FALSE(overp_first_failure(p7.n, 7, 2, 1000));
    for (BigInt m = p7.modulus; m < p7.n; m += p7.modulus) CHECK_FALSE(overp_oracle(m, 7));
}

TEST_CASE("over-P sequence") {
    CHECK(overp_threshold(3.0, 1) == 46);
    CHECK_THROWS_AS(overp_threshold(3.0, 5), BudgetError);

    OverPSequenceConfig cfg;
    cfg.depth = 0;
    cfg.induced_cap = 200;
    auto seq = overP_sequence(cfg);
    CHECK(seq.anchors.empty());
    CHECK(seq.induced.size() == oracle::count_kfree(200));

    cfg.depth = 1;
    seq = overP_sequence(cfg);
    REQUIRE(seq.thresholds == std::vector<std::uint64_t>{46});
    REQUIRE(seq.anchors.size() == 1);
    BigInt W = 1;
    for (std::uint64_t p = 2; p <= 46; ++p) {
        if (oracle::is_prime(p)) W *= p * p;
    }
    CHECK(seq.anchors[0].modulus == W);
    CHECK(seq.anchors[0].n % W == 0);
    for (auto a : seq.induced) CHECK(oracle::kfree(a));

    cfg.depth = 3;
    CHECK_THROWS_AS(overP_sequence(cfg), BudgetError);

    OverPSequenceConfig custom;
    custom.depth = 2;
    custom.custom_thresholds = {3, 5};
    custom.induced_cap = 300;
    seq = overP_sequence(custom);
    CHECK(seq.custom_schedule);
    REQUIRE(seq.anchors.size() == 2);
    CHECK(seq.anchors[0].n == 252);
    CHECK(seq.anchors[1].n > seq.anchors[0].n);
    for (auto a : seq.induced) {
        CHECK(oracle::kfree(a));
        for (const auto& anchor : seq.anchors) CHECK(oracle::kfree(to_u64(anchor.n) + a));
    }
}
