#include "sqfree/admissible_max.hpp"

#include "sqfree/large_sieve.hpp"
#include "sqfree/sieve_core.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

namespace sqfree {

namespace {

using Word = std::uint64_t;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kDefaultShiftRange = 4096;

std::size_t popcount_and(const Word* a, const Word* b, std::size_t n) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += std::popcount(a[i] & b[i]);
    return total;
}

// (s & a & ~b) == 0
bool subset_within(const Word* s, const Word* a, const Word* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (s[i] & a[i] & ~b[i]) return false;
    }
    return true;
}

class Searcher {
public:
    Searcher(std::uint64_t x, unsigned k, Clock::time_point deadline)
        : x_(x), deadline_(deadline), words_((x + 63) / 64) {
        primes_ = constraining_primes(x, k);
        std::reverse(primes_.begin(), primes_.end());
        const std::size_t n = primes_.size();
        for (std::uint64_t p : primes_) moduli_.push_back(*checked_pow(p, k));
        masks_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            masks_[i].assign(moduli_[i] * words_, 0);
            for (std::uint64_t a = 1; a <= x; ++a) {
                Word* row = mask(i, a % moduli_[i]);
                row[(a - 1) / 64] |= Word{1} << ((a - 1) % 64);
            }
        }
        stack_.assign(n + 1, std::vector<Word>(words_, 0));
        for (std::uint64_t a = 1; a <= x; ++a) stack_[0][(a - 1) / 64] |= Word{1} << ((a - 1) % 64);
        hits_.resize(n);
        for (std::size_t i = 0; i < n; ++i) hits_[i].resize(moduli_[i]);
        chosen_.assign(n, 0);
        std::uint64_t largest_pair = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (moduli_[i] * moduli_[j] < x) largest_pair = std::max(largest_pair, moduli_[i] * moduli_[j]);
            }
        }
        residue_count_.assign(largest_pair + 1, 0);
    }

    std::size_t depth() const { return primes_.size(); }
    const std::vector<std::uint64_t>& primes() const { return primes_; }
    std::uint64_t nodes() const { return nodes_; }
    bool timed_out() const { return timed_out_; }

    void seed_incumbent(std::uint64_t value, std::vector<std::uint64_t> classes) {
        best_ = value;
        best_classes_ = std::move(classes);
    }
    std::uint64_t best() const { return best_; }
    const std::vector<std::uint64_t>& best_classes() const { return best_classes_; }

    // Phase 1: maximise.
    void maximise() { dfs_max(0, x_); }

    // Phase 2: first assignment in branch order reaching `target`.
    bool first_reaching(std::uint64_t target) {
        target_ = target;
        return dfs_first(0, x_);
    }

private:
    Word* mask(std::size_t i, std::uint64_t b) { return masks_[i].data() + b * words_; }

    bool out_of_time() {
        if (timed_out_) return true;
        if ((++nodes_ & 1023) == 0 && Clock::now() > deadline_) timed_out_ = true;
        return timed_out_;
    }

    // Fills hits_[i] and returns the smallest class hit count for prime i.
    std::uint64_t fill_hits(std::size_t i, const Word* S) {
        std::uint64_t smallest = UINT64_MAX;
        for (std::uint64_t b = 0; b < moduli_[i]; ++b) {
            hits_[i][b] = popcount_and(S, mask(i, b), words_);
            smallest = std::min(smallest, hits_[i][b]);
        }
        return smallest;
    }

    // Largest number of survivors in one class modulo moduli_[i] * moduli_[j].
    std::uint64_t pair_overlap(std::size_t i, std::size_t j, const Word* S) {
        const std::uint64_t M = moduli_[i] * moduli_[j];
        if (M >= x_) return 1;
        std::uint64_t top = 0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t w = 0; w < words_; ++w) {
                for (Word bits = S[w]; bits; bits &= bits - 1) {
                    const std::uint64_t a = w * 64 + std::countr_zero(bits) + 1;
                    auto& slot = residue_count_[a % M];
                    if (pass == 0) top = std::max<std::uint64_t>(top, ++slot);
                    else slot = 0;
                }
            }
        }
        return top;
    }

    // Lower bound on how many survivors primes i.. must still remove:
    // each prime removes at least its smallest class, and by Bonferroni the
    // union is at least sum m_q - sum over pairs of their largest overlap.
    std::uint64_t removal_bound(std::size_t i, const Word* S) {
        std::uint64_t sum = 0, largest = 0;
        for (std::size_t q = i; q < depth(); ++q) {
            const std::uint64_t m = fill_hits(q, S);
            sum += m;
            largest = std::max(largest, m);
        }
        if (sum <= largest) return largest;
        std::uint64_t overlaps = 0;
        for (std::size_t q = i; q < depth() && overlaps < sum; ++q) {
            for (std::size_t r = q + 1; r < depth() && overlaps < sum; ++r) {
                overlaps += pair_overlap(q, r, S);
            }
        }
        return std::max(largest, sum > overlaps ? sum - overlaps : 0);
    }

    // Classes of prime i whose hit set contains no earlier listed class's hit set.
    std::vector<std::uint64_t> undominated(std::size_t i, const Word* S,
                                           const std::vector<std::uint64_t>& order) {
        std::vector<std::uint64_t> kept;
        for (std::uint64_t b : order) {
            bool dominated = false;
            for (std::uint64_t c : kept) {
                if (subset_within(S, mask(i, c), mask(i, b), words_)) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) kept.push_back(b);
        }
        return kept;
    }

    void dfs_max(std::size_t i, std::uint64_t survivors) {
        if (out_of_time()) return;
        const Word* S = stack_[i].data();
        if (i == depth()) {
            if (survivors > best_) {
                best_ = survivors;
                best_classes_ = chosen_;
            }
            return;
        }
        const std::uint64_t removal = removal_bound(i, S);
        if (survivors <= best_ + removal) return;

        std::vector<std::uint64_t> order(moduli_[i]);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint64_t a, std::uint64_t b) { return hits_[i][a] < hits_[i][b]; });
        const auto hits = hits_[i];
        for (std::uint64_t b : undominated(i, S, order)) {
            Word* child = stack_[i + 1].data();
            const Word* m = mask(i, b);
            for (std::size_t w = 0; w < words_; ++w) child[w] = S[w] & ~m[w];
            chosen_[i] = b;
            dfs_max(i + 1, survivors - hits[b]);
            if (timed_out_) return;
        }
    }

    bool dfs_first(std::size_t i, std::uint64_t survivors) {
        if (out_of_time()) return false;
        const Word* S = stack_[i].data();
        if (i == depth()) {
            if (survivors < target_) return false;
            best_classes_ = chosen_;
            return true;
        }
        const std::uint64_t removal = removal_bound(i, S);
        if (survivors < target_ + removal) return false;

        // Every class tried so far failed, so any class whose hit set contains
        // one of theirs fails too.
        const auto hits = hits_[i];
        std::vector<std::uint64_t> tried;
        for (std::uint64_t b = 0; b < moduli_[i]; ++b) {
            if (survivors - hits[b] < target_) continue;
            bool dominated = false;
            for (std::uint64_t c : tried) {
                if (subset_within(S, mask(i, c), mask(i, b), words_)) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) continue;
            Word* child = stack_[i + 1].data();
            const Word* m = mask(i, b);
            for (std::size_t w = 0; w < words_; ++w) child[w] = S[w] & ~m[w];
            chosen_[i] = b;
            if (dfs_first(i + 1, survivors - hits[b])) return true;
            if (timed_out_) return false;
            tried.push_back(b);
        }
        return false;
    }

    std::uint64_t x_;
    Clock::time_point deadline_;
    std::size_t words_;
    std::vector<std::uint64_t> primes_;   // descending
    std::vector<std::uint64_t> moduli_;
    std::vector<std::vector<Word>> masks_;  // masks_[i][b * words_ ...]: a in [x] with a = b mod p_i^k
    std::vector<std::vector<Word>> stack_;  // survivors at each depth
    std::vector<std::vector<std::uint64_t>> hits_;
    std::vector<std::uint64_t> residue_count_;
    std::vector<std::uint64_t> chosen_;
    std::vector<std::uint64_t> best_classes_;
    std::uint64_t best_ = 0;
    std::uint64_t target_ = 0;
    std::uint64_t nodes_ = 0;
    bool timed_out_ = false;
};

std::uint64_t shift_survivors(std::uint64_t x, const std::vector<std::uint64_t>& moduli,
                              const std::vector<std::uint64_t>& shift_mod) {
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= x; ++a) {
        bool alive = true;
        for (std::size_t i = 0; i < moduli.size() && alive; ++i) {
            alive = (shift_mod[i] + a) % moduli[i] != 0;
        }
        count += alive;
    }
    return count;
}

}  // namespace

std::string to_string(MaxStatus status) {
    return status == MaxStatus::Exact ? "EXACT" : "LOWER_BOUND";
}

std::vector<std::uint64_t> constraining_primes(std::uint64_t x, unsigned k) {
    if (k < 2) throw ArgumentError("power k must be at least 2");
    const PrimeTable table = build_prime_table(integer_root(x, k));
    return table.primes;
}

std::uint64_t survivor_count(std::uint64_t x, unsigned k,
                             const std::map<std::uint64_t, std::uint64_t>& classes) {
    std::vector<std::uint64_t> moduli, residues;
    for (const auto& [p, b] : classes) {
        const auto pk = checked_pow(p, k);
        if (!pk) throw ArgumentError("p^k exceeds 64 bits");
        if (b >= *pk) throw ArgumentError("class is not reduced modulo p^k");
        moduli.push_back(*pk);
        residues.push_back(b);
    }
    std::uint64_t count = 0;
    for (std::uint64_t a = 1; a <= x; ++a) {
        bool alive = true;
        for (std::size_t i = 0; i < moduli.size() && alive; ++i) alive = a % moduli[i] != residues[i];
        count += alive;
    }
    return count;
}

ShiftLowerBound admissible_max_lower_shift(std::uint64_t x, unsigned k, const ShiftSource& source) {
    if (x < 1) throw ArgumentError("x must be at least 1");
    const auto primes = constraining_primes(x, k);
    std::vector<std::uint64_t> moduli;
    for (std::uint64_t p : primes) moduli.push_back(*checked_pow(p, k));

    ShiftLowerBound best;
    bool have = false;
    std::vector<std::uint64_t> shift_mod(moduli.size());
    auto consider = [&](const BigInt& shift) {
        const std::uint64_t count = shift_survivors(x, moduli, shift_mod);
        if (!have || count > best.count) {
            best = {count, shift};
            have = true;
        }
    };

    if (source.range_lo <= source.range_hi) {
        for (std::uint64_t y = source.range_lo;; ++y) {
            for (std::size_t i = 0; i < moduli.size(); ++i) shift_mod[i] = y % moduli[i];
            consider(BigInt(y));
            if (y == source.range_hi) break;
        }
    }
    std::mt19937_64 rng(source.seed);
    std::vector<ResidueClass> classes;
    for (std::uint64_t d = 0; d < source.random_draws; ++d) {
        classes.clear();
        for (std::size_t i = 0; i < moduli.size(); ++i) {
            shift_mod[i] = rng() % moduli[i];
            classes.emplace_back(BigInt(shift_mod[i]), BigInt(moduli[i]));
        }
        const std::uint64_t count = shift_survivors(x, moduli, shift_mod);
        if (!have || count > best.count) {
            best = {count, classes.empty() ? BigInt(0) : crt_combine(classes).residue};
            have = true;
        }
    }
    return best;
}

AdmissibleMaxResult admissible_max_exact(std::uint64_t x, unsigned k, Seconds time_budget) {
    if (x < 1) throw ArgumentError("x must be at least 1");
    if (k < 2) throw ArgumentError("power k must be at least 2");
    const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(time_budget);
    AdmissibleMaxResult result;
    result.x = x;
    result.power = k;

    Searcher search(x, k, deadline);
    const auto& primes = search.primes();  // descending
    {
        ShiftSource source;
        source.range_hi = kDefaultShiftRange;
        const ShiftLowerBound start = admissible_max_lower_shift(x, k, source);
        std::vector<std::uint64_t> classes;
        for (std::uint64_t p : primes) {
            const std::uint64_t m = *checked_pow(p, k);
            classes.push_back((m - mod_u64(start.shift, m)) % m);
        }
        search.seed_incumbent(start.count, std::move(classes));
    }
    search.maximise();
    result.status = search.timed_out() ? MaxStatus::LowerBound : MaxStatus::Exact;
    result.value = search.best();
    std::vector<std::uint64_t> classes = search.best_classes();

    if (result.status == MaxStatus::Exact) {
        Searcher lex(x, k, deadline);
        if (lex.first_reaching(result.value)) classes = lex.best_classes();
        result.nodes = lex.nodes();
    }
    result.nodes += search.nodes();
    for (std::size_t i = 0; i < primes.size(); ++i) result.witness[primes[i]] = classes[i];
    return result;
}

std::uint64_t admissible_max_upper_sieve(std::uint64_t x, unsigned k) {
    if (x < 1) throw ArgumentError("x must be at least 1");
    if (k < 2) throw ArgumentError("power k must be at least 2");
    const unsigned e = 2 * k + 1;
    std::uint64_t root = integer_root(x, e);
    if (*checked_pow(root, e) < x) ++root;
    const QOptimum best = optimize_Q(x, OmegaProfile::constant_one(k), ModuliFlavor::Power, 1, root + 2);
    const BigInt floor_value = numerator(best.bound) / denominator(best.bound);
    return to_u64(floor_value);
}

}  // namespace sqfree
