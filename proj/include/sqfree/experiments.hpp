// experiments.hpp
// OEIS b-file ingestion and cross-checking, the A(x) versus |SF cap [x]|
// shift data, and the command-line entry point.

#pragma once

#include "sqfree/admissible_max.hpp"
#include "sqfree/errors.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/property_checks.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sqfree {

struct BFile {
    std::string id;  // "A083544"
    std::map<std::int64_t, BigInt> entries;
    std::string source;

    friend bool operator==(const BFile& a, const BFile& b) {
        return a.id == b.id && a.entries == b.entries;
    }
};

// "<index> <value>" lines; '#' lines and blank lines skipped. ParseError
// carries the 1-based line number; FormatError on a repeated or decreasing index.
BFile parse_oeis_bfile(const std::string& text, const std::string& id = "",
                       const std::string& source = "");

std::string emit_bfile(const BFile& bfile);

// Reads bNNNNNN.txt; the id is taken from the file name.
BFile load_bfile(const std::filesystem::path& path);

// Directory holding fixture b-files: $SQFREE_OEIS_DIR, else the shipped data.
std::filesystem::path oeis_directory();

enum class Quantity {
    SfCount,    // |{n <= m : n k-free}|
    AOfX,       // A(m)
    NamedTerm,  // named_sequence_term(tag, m)
    SfNth,      // m-th k-free number
};

std::string to_string(Quantity q);

// OEIS index n maps to the artifact argument m = n + shift, for n >= first.
struct ManifestRule {
    std::string id;
    Quantity quantity = Quantity::SfCount;
    std::optional<SequenceTag> tag;
    std::int64_t shift = 0;
    std::int64_t first = 1;
};

struct SequenceManifest {
    std::map<std::string, ManifestRule> rules;

    // ConfigError when no rule exists.
    const ManifestRule& rule(const std::string& id) const;

    // One rule per line: "<id> <quantity> [tag=A1] [shift=-1] [first=1]".
    static SequenceManifest parse(const std::string& text);
    static SequenceManifest load(const std::filesystem::path& path);
};

struct CrosscheckOptions {
    std::optional<std::int64_t> lo;
    std::optional<std::int64_t> hi;
    unsigned power = 2;
    Seconds a_budget = Seconds(60.0);  // per x, for A(x)
};

struct CrosscheckMismatch {
    std::int64_t index;
    BigInt expected;
    BigInt computed;
};

struct CrosscheckReport {
    std::string id;
    std::uint64_t checked = 0;
    std::uint64_t matches = 0;
    std::uint64_t skipped = 0;     // below the rule's first index
    std::uint64_t unresolved = 0;  // A(x) only reached LOWER_BOUND, not above the fixture
    std::vector<CrosscheckMismatch> mismatches;

    bool ok() const { return mismatches.empty(); }
};

CrosscheckReport crosscheck(const BFile& bfile, const SequenceManifest& manifest,
                            const CrosscheckOptions& options = {});

struct ShiftRow {
    std::uint64_t x = 0;
    std::uint64_t a_value = 0;
    std::uint64_t q_value = 0;
    double a_minus_main = 0.0;
    double q_minus_main = 0.0;
    MaxStatus status = MaxStatus::Exact;
};

// One row per x in [1, x_max]; the budget applies to each A(x) separately.
std::vector<ShiftRow> figure_shift_data(std::uint64_t x_max, unsigned k = 2,
                                        Seconds time_budget = Seconds(60.0));

// Header "x,a_minus_main,q_minus_main,status", reals with 10 significant digits, LF endings.
std::string format_shift_csv(const std::vector<ShiftRow>& rows);

// "%.10g"
std::string format_real(double value);

struct AppendixSummary {
    std::uint64_t trials = 0;
    std::uint64_t holds = 0;
    std::uint64_t plancherel_ok = 0;
    double worst_plancherel_error = 0.0;  // relative
    double smallest_margin = 0.0;         // min over trials of (lhs - rhs) / max(1, rhs)
};

// Random removed sets (omega uniform in [1, p^k - 1]) and random complex
// coefficients supported off them, p drawn from `primes`.
AppendixSummary run_appendix_trials(std::uint64_t trials, std::uint64_t seed,
                                    const std::vector<std::uint64_t>& primes = {2, 3, 5, 7},
                                    unsigned k = 2);

// Exit codes: 0 success, 1 computation failure or mismatch, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqfree
