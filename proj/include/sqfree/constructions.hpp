// constructions.hpp
// Explicit sequence constructions: the slow-density property-P sequence, the
// greedy squarefree-sums sequence, CRT-restricted witness search for fast
// admissible sequences, the dense property-Q anchor iteration, the random
// admissible counterexample sampler, and base points for the over-P
// construction.
//
// Randomised choices in the underlying arguments are replaced by seeded,
// deterministic scans. Ascending order is the default everywhere.

#pragma once

#include "sqfree/errors.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/property_checks.hpp"
#include "sqfree/sieve_core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sqfree {

// ---------------------------------------------------------------------------
// Slow-density sequence with property P.

// A named growth function f : N -> N (selected by CLI token).
struct GrowthFunction {
    std::string name;
    std::function<std::uint64_t(std::uint64_t)> eval;
};

GrowthFunction growth_identity();
GrowthFunction growth_linear(std::uint64_t c);
GrowthFunction growth_j_log_j();  // j * ceil(ln j), with 1 at j = 1
GrowthFunction growth_constant(std::uint64_t c);
// "identity", "linear:<c>", "jlogj", "const:<c>".
GrowthFunction parse_growth(const std::string& token);

struct PropertyPConfig {
    GrowthFunction f = growth_identity();
    std::size_t count = 0;
    unsigned power = 2;
    // Largest index inspected when locating the levels l_r.
    std::uint64_t scan_horizon = std::uint64_t{1} << 22;
};

struct PropertyPSequence {
    std::vector<std::uint64_t> terms;   // a_1 .. a_count
    std::vector<std::uint64_t> levels;  // l_1 < l_2 < ... (first entry beyond count included)
    std::vector<std::uint64_t> moduli;  // W_r = (p_1 ... p_r)^k, aligned with levels

    // k(j): number of levels l_r <= j.
    std::size_t level_of(std::uint64_t j) const;
};

// a_j = j for j <= l_1; afterwards a_j is the smallest integer above a_{j-1}
// with a_j = -r mod p_r^k for every r <= k(j). Throws BudgetError when f
// never reaches the next needed W_r inside the scan horizon.
PropertyPSequence property_P_sequence(const PropertyPConfig& config);

// ---------------------------------------------------------------------------
// Greedy sequence with squarefree sums.

struct GreedySkip {
    std::uint64_t candidate;
    std::uint64_t partner;  // the earlier term (or the candidate itself for 2c)
    std::uint64_t prime;    // smallest p with p^k | candidate + partner
};

struct GreedySumsResult {
    std::vector<std::uint64_t> terms;
    std::vector<GreedySkip> skipped;  // one record per rejected candidate
};

GreedySumsResult greedy_squarefree_sums(std::size_t count, bool include_diagonal,
                                        unsigned k = 2);

// ---------------------------------------------------------------------------
// CRT-restricted witness search.

enum class IntervalMode {
    Half,     // [ceil(x/2), x]
    Forward,  // (x, x + floor(x^(10/11)))
};

enum class ScanOrder {
    Ascending,
    SeededRandom,  // ascending from a seeded random starting candidate, wrapping around
};

std::string to_string(IntervalMode m);
IntervalMode parse_interval_mode(const std::string& token);

struct SuffSearchConfig {
    double theta = 0.1;  // W = prod_{p <= theta ln x} p^k, theta in (0, 1/4)
    IntervalMode mode = IntervalMode::Half;
    ScanOrder order = ScanOrder::Ascending;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> prime_cutoff;  // nullopt: full certification
    unsigned power = 2;
    std::uint64_t max_candidates = UINT64_MAX;
};

struct SuffSearchResult {
    std::optional<WitnessReport> witness;
    std::uint64_t candidates_examined = 0;
    BigInt modulus = 1;   // W
    BigInt residue = 0;   // candidates are = residue (mod W), i.e. -b
    std::uint64_t interval_lo = 0;
    std::uint64_t interval_hi = 0;
};

// Looks for n = -b (mod W) in the chosen interval with n + a k-free (at the
// configured certification level) for every a in the set with a <= x.
// b is assembled by CRT from the set's smallest avoided classes modulo p^k,
// p <= theta ln x; ArgumentError when some such prime has no avoided class.
SuffSearchResult suff_witness_search(const FiniteSet& set, std::uint64_t x,
                                     const SuffSearchConfig& config = {});

// ---------------------------------------------------------------------------
// Dense property-Q iteration.

// {a in (lo, hi] : a k-free and anchor + a k-free}
struct DenseQSlice {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::uint64_t anchor = 0;
};

struct GridPoint {
    std::uint64_t R = 0;
    double ratio = 0.0;    // |{a in SF_k cap [R] : anchor + a in SF_k}| / R
    double deficit = 0.0;  // 1/zeta(k) - ratio
};

struct DenseQState {
    unsigned power = 2;
    std::vector<std::uint64_t> anchors;  // n_1 < n_2 < ...
    std::vector<double> epsilons;        // epsilon used for each accepted step
    std::vector<DenseQSlice> slices;     // one per accepted step
    std::vector<std::vector<GridPoint>> grids;
    std::vector<std::uint64_t> candidates_examined;
};

struct DenseQConfig {
    std::uint64_t initial_anchor = 2;
    double epsilon = 0.5;
    std::uint64_t x = 0;  // search multiples of W in [x/2, x]
    ScanOrder order = ScanOrder::Ascending;
    std::uint64_t seed = 0;
    std::uint64_t grid_cap = std::uint64_t{1} << 20;  // largest R on the geometric grid
    std::uint64_t max_candidates = UINT64_MAX;
};

// On an empty state, records initial_anchor as n_1. Otherwise, with n = n_k
// and W = prod_{p <= n^2} p^k, accepts the first multiple n' of W in
// [x/2, x] with n' >= (k+1) n_k and n' + a k-free for every k-free a <= n
// (checked with all primes up to (n' + n)^(1/k)). ArgumentError if no
// multiple of W lies in the interval; BudgetError when every candidate fails.
DenseQState dense_Q_step(DenseQState state, const DenseQConfig& config);

// Members of a slice, at most `limit` of them (ascending).
std::vector<std::uint64_t> slice_members(const DenseQSlice& slice, unsigned k,
                                         std::uint64_t limit = UINT64_MAX);

// ---------------------------------------------------------------------------
// Random admissible counterexample.

struct SamplerConfig {
    double C = 5.0;
    std::uint64_t x_max = 3;
    std::uint64_t seed = 0;
    unsigned power = 2;
};

// min(C ln n ln ln n / n, 1) for n >= 3.
double sampler_probability(std::uint64_t n, double C);

// Uniform draw in [0, 1) keyed by (seed, n): order independent and reproducible.
double keyed_uniform(std::uint64_t seed, std::uint64_t n);

// k-free n in [3, x_max] kept iff keyed_uniform(seed, n) < mu_n.
FiniteSet sample_counterexample(const SamplerConfig& config);

// Sum of mu_n over k-free n in [3, x_max]: the expected sample size.
double expected_sample_size(const SamplerConfig& config);

struct OccupancyRow {
    std::uint64_t prime = 0;
    std::uint64_t modulus = 0;
    std::vector<std::uint64_t> unoccupied_nonzero;
};

// For each prime p <= ln x: the nonzero classes mod p^k missed by set cap [x].
std::vector<OccupancyRow> occupancy_probe(const FiniteSet& set, std::uint64_t x,
                                          unsigned k = 2);

// ---------------------------------------------------------------------------
// Base points with n = 0 mod p^k for p <= P and n + a != 0 mod p^k for
// p > P, 1 <= a <= p / (ln ln p)^2.

// floor(p / (ln ln p)^2) for p >= 5.
std::uint64_t overp_shift_limit(std::uint64_t p);

struct OverPConfig {
    std::uint64_t threshold = 3;               // P
    std::uint64_t candidate_budget = 1'000'000;
    std::uint64_t prime_check_cap = 1'000'000; // largest prime tested in condition (b)
    unsigned power = 2;
    BigInt start_after = 0;                    // only n > start_after are considered
};

struct OverPPoint {
    BigInt n;
    BigInt modulus;                   // W = prod_{p <= P} p^k
    std::uint64_t checked_prime_limit = 0;
    bool fully_verified = false;      // (b) checked on the entire forced prime range
    std::uint64_t candidates_examined = 0;
};

OverPPoint overP_base_point(const OverPConfig& config);

// Checks conditions (a) and (b) for n directly, with primes up to the cap.
// Returns the first failing prime, or nullopt.
std::optional<std::uint64_t> overp_first_failure(const BigInt& n, std::uint64_t threshold,
                                                 unsigned k, std::uint64_t prime_check_cap);

struct OverPSequenceConfig {
    double K = 3.0;
    std::size_t depth = 1;
    unsigned power = 2;
    std::uint64_t bigint_budget_bits = std::uint64_t{1} << 16;
    std::uint64_t candidate_budget = 1'000'000;
    std::uint64_t prime_check_cap = 1'000'000;
    std::uint64_t induced_cap = 1000;  // induced set is computed on [1, induced_cap]
    // Replaces ceil(K exp exp j) when non-empty. This departs from the
    // construction and is labelled as such in the result.
    std::vector<std::uint64_t> custom_thresholds;
};

struct OverPSequence {
    std::vector<std::uint64_t> thresholds;  // P_j
    std::vector<OverPPoint> anchors;        // n_1 < n_2 < ...
    std::vector<std::uint64_t> induced;     // {a <= cap : a k-free, n_j + a k-free (primes <= limit)}
    std::uint64_t induced_prime_limit = 0;
    bool custom_schedule = false;
};

// ceil(K exp(exp(j))).
std::uint64_t overp_threshold(double K, std::size_t j);

OverPSequence overP_sequence(const OverPSequenceConfig& config);

}  // namespace sqfree
