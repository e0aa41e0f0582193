#include "doctest.h"
#include "oracles.hpp"

#include "sqfree/admissible_max.hpp"
#include "sqfree/sieve_core.hpp"

#include <map>

using namespace sqfree;

namespace {

const AdmissibleMaxResult& exact(std::uint64_t x) {
    static std::map<std::uint64_t, AdmissibleMaxResult> cache;
    auto it = cache.find(x);
    if (it == cache.end()) it = cache.emplace(x, admissible_max_exact(x, 2, Seconds(120))).first;
    return it->second;
}

std::uint64_t recount(std::uint64_t x, const std::map<std::uint64_t, std::uint64_t>& witness,
                      unsigned k = 2) {
    std::uint64_t alive = 0;
    for (std::uint64_t a = 1; a <= x; ++a) {
        bool ok = true;
        for (auto [p, b] : witness) ok = ok && a % oracle::ipow(p, k) != b;
        alive += ok;
    }
    return alive;
}

}  // namespace

TEST_CASE("examples") {
    CHECK(exact(1).value == 1);
    CHECK(exact(1).witness.empty());
    CHECK(exact(4).value == 3);
    CHECK(exact(10).value == 8);
    CHECK(exact(10).witness == std::map<std::uint64_t, std::uint64_t>{{2, 3}, {3, 3}});
    CHECK(to_string(MaxStatus::Exact) == "EXACT");
    CHECK(to_string(MaxStatus::LowerBound) == "LOWER_BOUND");
    CHECK(constraining_primes(50, 2) == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(constraining_primes(3, 2).empty());
}

TEST_CASE("exact agrees with flat enumeration") {
    for (std::uint64_t x = 1; x <= 12; ++x) {
        REQUIRE(exact(x).status == MaxStatus::Exact);
        REQUIRE(exact(x).value == oracle::admissible_max_flat(x));
    }
    for (std::uint64_t x : {20, 27, 30}) {
        CHECK(admissible_max_exact(x, 3).value == oracle::admissible_max_flat(x, 3));
    }
    for (std::uint64_t x : {13, 25, 30}) CHECK(exact(x).value == oracle::admissible_max_flat(x));
}

TEST_CASE("witness, unit steps, dominance and sandwich up to 60") {
    const std::uint64_t top = 60;
    const auto counts = power_free_prefix_counts(top + 1, 2, build_prime_table(10));
    for (std::uint64_t x = 1; x <= top; ++x) {
        const auto& r = exact(x);
        REQUIRE(r.status == MaxStatus::Exact);
        REQUIRE(recount(x, r.witness) == r.value);
        REQUIRE(survivor_count(x, 2, r.witness) == r.value);
        std::vector<std::uint64_t> primes;
        for (auto [p, b] : r.witness) {
            primes.push_back(p);
            REQUIRE(b < p * p);
        }
        REQUIRE(primes == constraining_primes(x, 2));
        REQUIRE(r.value >= counts[x]);
        if (x >= 18) REQUIRE(r.value > counts[x]);
        if (x > 1) {
            const std::uint64_t step = r.value - exact(x - 1).value;
            REQUIRE(step <= 1);
        }
        const auto lower = admissible_max_lower_shift(x, 2, ShiftSource{0, 2000, 200, x});
        REQUIRE(lower.count <= r.value);
        REQUIRE(r.value <= admissible_max_upper_sieve(x, 2));
    }
}

TEST_CASE("lower shift examples") {
    CHECK(admissible_max_lower_shift(10, 2, ShiftSource{0, 0, 0, 0}).count == 7);
    const auto scan = admissible_max_lower_shift(10, 2, ShiftSource{0, 10000, 0, 0});
    CHECK(scan.count == 8);
    // the reported shift really attains the count
    std::uint64_t alive = 0;
    for (std::uint64_t a = 1; a <= 10; ++a) alive += oracle::kfree(to_u64(scan.shift) + a);
    CHECK(alive == 8);
    CHECK(admissible_max_lower_shift(1, 2, ShiftSource{0, 5, 3, 1}).count == 1);

    const auto drawn = admissible_max_lower_shift(40, 2, ShiftSource{0, 0, 500, 3});
    const auto again = admissible_max_lower_shift(40, 2, ShiftSource{0, 0, 500, 3});
    CHECK(drawn.count == again.count);
    CHECK(drawn.shift == again.shift);
    CHECK(drawn.count <= exact(40).value);
}

TEST_CASE("upper sieve examples") {
    CHECK(admissible_max_upper_sieve(100, 2) == 87);
    CHECK(admissible_max_upper_sieve(1, 2) == 2);
    CHECK(admissible_max_upper_sieve(10, 2) >= 8);
}

TEST_CASE("budget degrades status only") {
    const auto r = admissible_max_exact(200, 2, Seconds(0.0));
    CHECK(r.status == MaxStatus::LowerBound);
    CHECK(recount(200, r.witness) == r.value);
    CHECK(r.value <= admissible_max_upper_sieve(200, 2));
}

TEST_CASE("larger exact values") {
    CHECK(exact(100).value == 65);
    CHECK(exact(120).value == 79);
    CHECK(exact(121).value == 80);
}
