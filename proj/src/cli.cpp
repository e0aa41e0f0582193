#include "sqfree/experiments.hpp"

#include "sqfree/admissible_max.hpp"
#include "sqfree/constructions.hpp"
#include "sqfree/large_sieve.hpp"
#include "sqfree/property_checks.hpp"
#include "sqfree/sieve_core.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>

namespace sqfree {

namespace {

std::string witness_field(const std::map<std::uint64_t, std::uint64_t>& witness) {
    std::string out;
    for (const auto& [p, b] : witness) {
        if (!out.empty()) out += ' ';
        out += std::to_string(p) + ":" + std::to_string(b);
    }
    return out;
}

void print_report(std::ostream& out, const WitnessReport& report) {
    out << "witness " << report.witness << "\n";
    out << "certification " << to_string(report.certification) << " (primes <= "
        << report.prime_cutoff << ")\n";
    for (const auto& t : report.trace) {
        out << "  " << t.element << " -> " << t.shifted;
        if (t.blocking_prime) out << " divisible by " << *t.blocking_prime << "^" << report.power;
        out << "\n";
    }
}

ScanOrder parse_order(const std::string& token) {
    if (token == "ascending") return ScanOrder::Ascending;
    if (token == "random") return ScanOrder::SeededRandom;
    throw ArgumentError("unknown order '" + token + "' (expected ascending or random)");
}

struct Options {
    std::uint64_t x = 0, xmin = 0, xmax = 0, count = 0, seed = 0;
    unsigned k = 2;
    double budget = 60.0;
    std::string format = "csv";
    bool bracket = false;
    std::string out_path;

    std::string tag, mode = "terms", strategy = "crt", interval = "half", order = "ascending";
    std::size_t prefix = 0;
    double theta = 0.1;
    std::uint64_t prime_bound = 50;
    std::optional<std::uint64_t> prime_cutoff;

    std::string growth = "identity";
    std::uint64_t horizon = std::uint64_t{1} << 22;
    bool no_diagonal = false, show_skips = false;

    std::uint64_t n1 = 2, grid_cap = std::uint64_t{1} << 20, steps = 1;
    double epsilon = 0.5;
    std::uint64_t max_candidates = UINT64_MAX;

    double C = 5.0;
    bool list = false, probe = false;

    std::uint64_t P = 0, candidate_budget = 1'000'000, prime_cap = 1'000'000, induced_cap = 1000;
    double K = 3.0;
    std::size_t depth = 1;
    std::vector<std::uint64_t> thresholds;
    std::uint64_t bigint_bits = std::uint64_t{1} << 16;

    std::uint64_t N = 1, Q = 1, qmax = 0;
    std::string profile = "one", flavor = "power";

    std::vector<std::string> ids, bfiles;
    std::string manifest;
    std::optional<std::int64_t> lo, hi;

    std::uint64_t trials = 1000;
};

int cmd_sieve_count(const Options& o, std::ostream& out) {
    const PrimeTable table = build_prime_table(integer_root(o.x, o.k));
    out << count_power_free_upto(o.x, o.k, table) << "\n";
    return 0;
}

int cmd_admissible_max(const Options& o, std::ostream& out) {
    std::uint64_t lo = o.x, hi = o.x;
    if (o.x == 0) {
        lo = std::max<std::uint64_t>(o.xmin, 1);
        hi = o.xmax;
    }
    if (lo == 0 || hi < lo) throw ArgumentError("give --x or a nonempty --xmin/--xmax range");
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    if (o.format == "csv") {
        out << "x,value,status,witness" << (o.bracket ? ",lower_shift,upper_sieve" : "") << "\n";
    }
    for (std::uint64_t x = lo; x <= hi; ++x) {
        const auto r = admissible_max_exact(x, o.k, Seconds(o.budget));
        std::uint64_t lower = 0, upper = 0;
        if (o.bracket) {
            ShiftSource source;
            source.range_hi = 10'000;
            lower = admissible_max_lower_shift(x, o.k, source).count;
            upper = admissible_max_upper_sieve(x, o.k);
        }
        if (o.format == "csv") {
            out << x << "," << r.value << "," << to_string(r.status) << "," << witness_field(r.witness);
            if (o.bracket) out << "," << lower << "," << upper;
            out << "\n";
        } else {
            nlohmann::ordered_json row;
            row["x"] = x;
            row["power"] = o.k;
            row["value"] = r.value;
            row["status"] = to_string(r.status);
            nlohmann::ordered_json w = nlohmann::ordered_json::object();
            for (const auto& [p, b] : r.witness) w[std::to_string(p)] = b;
            row["witness"] = w;
            if (o.bracket) {
                row["lower_shift"] = lower;
                row["upper_sieve"] = upper;
            }
            rows.push_back(row);
        }
    }
    if (o.format != "csv") out << rows.dump(2) << "\n";
    return 0;
}

int cmd_figure_shift(const Options& o, std::ostream& out) {
    const std::string csv = format_shift_csv(figure_shift_data(o.xmax, o.k, Seconds(o.budget)));
    if (o.out_path.empty()) {
        out << csv;
    } else {
        std::ofstream file(o.out_path, std::ios::binary);
        if (!file) throw ConfigError("cannot write " + o.out_path);
        file << csv;
    }
    return 0;
}

int cmd_verify_named(const Options& o, std::ostream& out, std::ostream& err) {
    const SequenceTag tag = parse_sequence_tag(o.tag);
    if (o.prefix < 1) throw ArgumentError("--prefix must be at least 1");
    const FiniteSet terms = named_sequence_prefix(tag, o.prefix);
    if (o.mode == "terms") {
        std::uint64_t j = first_index(tag);
        for (const auto& t : terms) out << j++ << " " << t << "\n";
        return 0;
    }
    if (o.mode == "certificate") {
        for (std::uint64_t p : build_prime_table(o.prime_bound)) {
            const ResidueClass c = named_sequence_certificate(tag, p, o.k);
            out << p << " " << c.residue << " mod " << c.modulus << "\n";
        }
        return 0;
    }
    if (o.mode == "q-witness") {
        const BigInt& last = terms[terms.size() - 1];
        if (!fits_u64(last)) throw ResourceError("a_" + std::to_string(o.prefix) + " exceeds 64 bits");
        SuffSearchConfig cfg;
        cfg.theta = o.theta;
        cfg.mode = parse_interval_mode(o.interval);
        cfg.order = parse_order(o.order);
        cfg.seed = o.seed;
        cfg.prime_cutoff = o.prime_cutoff;
        cfg.power = o.k;
        cfg.max_candidates = o.max_candidates;
        const auto result = suff_witness_search(terms, to_u64(last), cfg);
        out << "x " << last << "\n";
        out << "modulus " << result.modulus << " residue " << result.residue << "\n";
        out << "interval [" << result.interval_lo << ", " << result.interval_hi << "]\n";
        out << "candidates " << result.candidates_examined << "\n";
        if (!result.witness) {
            err << "no witness found\n";
            return 1;
        }
        print_report(out, *result.witness);
        return 0;
    }
    if (o.mode == "q-prefix") {
        QPrefixOptions q;
        q.strategy = parse_q_strategy(o.strategy);
        q.prime_cutoff = o.prime_cutoff;
        q.power = o.k;
        q.theta = o.theta;
        int status = 0;
        for (std::size_t j = 2; j <= o.prefix; ++j) {
            const auto report = check_Q_prefix(terms, j, q);
            out << "j=" << j << " ";
            if (report) {
                out << "witness " << report->witness << " " << to_string(report->certification) << "\n";
            } else {
                out << "none\n";
                status = 1;
            }
        }
        return status;
    }
    throw ArgumentError("unknown mode '" + o.mode + "' (expected terms, certificate, q-witness or q-prefix)");
}

int cmd_construct_P(const Options& o, std::ostream& out) {
    PropertyPConfig cfg;
    cfg.f = parse_growth(o.growth);
    cfg.count = o.count;
    cfg.power = o.k;
    cfg.scan_horizon = o.horizon;
    const auto seq = property_P_sequence(cfg);
    out << "# f=" << cfg.f.name << " levels";
    for (auto l : seq.levels) out << " " << l;
    out << "\n";
    for (std::size_t j = 0; j < seq.terms.size(); ++j) out << j + 1 << " " << seq.terms[j] << "\n";
    return 0;
}

int cmd_construct_greedy(const Options& o, std::ostream& out) {
    const auto result = greedy_squarefree_sums(o.count, !o.no_diagonal, o.k);
    for (std::size_t j = 0; j < result.terms.size(); ++j) out << j + 1 << " " << result.terms[j] << "\n";
    if (o.show_skips) {
        for (const auto& s : result.skipped) {
            out << "# skip " << s.candidate << ": " << s.candidate << " + " << s.partner
                << " divisible by " << s.prime << "^" << o.k << "\n";
        }
    }
    return 0;
}

int cmd_construct_dense(const Options& o, std::ostream& out) {
    DenseQState state;
    state.power = o.k;
    DenseQConfig cfg;
    cfg.initial_anchor = o.n1;
    cfg.epsilon = o.epsilon;
    cfg.x = o.x;
    cfg.order = parse_order(o.order);
    cfg.seed = o.seed;
    cfg.grid_cap = o.grid_cap;
    cfg.max_candidates = o.max_candidates;
    state = dense_Q_step(state, cfg);
    for (std::uint64_t s = 0; s < o.steps; ++s) state = dense_Q_step(state, cfg);
    out << "anchors";
    for (auto n : state.anchors) out << " " << n;
    out << "\n";
    for (std::size_t i = 0; i < state.slices.size(); ++i) {
        const auto& slice = state.slices[i];
        out << "step " << i + 1 << ": candidates " << state.candidates_examined[i] << ", slice ("
            << slice.lo << ", " << slice.hi << "]\n";
        for (const auto& g : state.grids[i]) {
            out << "  R=" << g.R << " ratio=" << format_real(g.ratio) << " deficit="
                << format_real(g.deficit) << "\n";
        }
    }
    return 0;
}

int cmd_construct_sample(const Options& o, std::ostream& out) {
    SamplerConfig cfg;
    cfg.C = o.C;
    cfg.x_max = o.xmax;
    cfg.seed = o.seed;
    cfg.power = o.k;
    const FiniteSet sample = sample_counterexample(cfg);
    out << "size " << sample.size() << "\n";
    out << "expected " << format_real(expected_sample_size(cfg)) << "\n";
    if (o.list) {
        for (const auto& a : sample) out << a << "\n";
    }
    if (o.probe) {
        for (const auto& row : occupancy_probe(sample, o.xmax, o.k)) {
            out << "p=" << row.prime << " unoccupied nonzero mod " << row.modulus << ":";
            for (auto r : row.unoccupied_nonzero) out << " " << r;
            out << "\n";
        }
    }
    return 0;
}

void print_point(std::ostream& out, const OverPPoint& point) {
    out << point.n << "\n";
    out << "# modulus " << point.modulus << ", candidates " << point.candidates_examined
        << ", (b) checked for primes <= " << point.checked_prime_limit
        << (point.fully_verified ? " (complete)" : " (partial)") << "\n";
}

int cmd_construct_overp(const Options& o, std::ostream& out) {
    if (o.P != 0) {
        OverPConfig cfg;
        cfg.threshold = o.P;
        cfg.candidate_budget = o.candidate_budget;
        cfg.prime_check_cap = o.prime_cap;
        cfg.power = o.k;
        print_point(out, overP_base_point(cfg));
        return 0;
    }
    OverPSequenceConfig cfg;
    cfg.K = o.K;
    cfg.depth = o.depth;
    cfg.power = o.k;
    cfg.bigint_budget_bits = o.bigint_bits;
    cfg.candidate_budget = o.candidate_budget;
    cfg.prime_check_cap = o.prime_cap;
    cfg.induced_cap = o.induced_cap;
    cfg.custom_thresholds = o.thresholds;
    const auto seq = overP_sequence(cfg);
    if (seq.custom_schedule) out << "# custom threshold schedule (not the K exp exp j schedule)\n";
    for (std::size_t j = 0; j < seq.anchors.size(); ++j) {
        out << "# P_" << j + 1 << " = " << seq.thresholds[j] << "\n";
        print_point(out, seq.anchors[j]);
    }
    out << "# induced set on [1, " << cfg.induced_cap << "], primes <= " << seq.induced_prime_limit
        << ": " << seq.induced.size() << " elements\n";
    if (o.list) {
        for (auto a : seq.induced) out << a << "\n";
    }
    return 0;
}

int cmd_sieve_bound(const Options& o, std::ostream& out) {
    OmegaProfile profile = parse_omega_preset(o.profile) == OmegaPreset::ConstantOne
                               ? OmegaProfile::constant_one(o.k)
                               : OmegaProfile::es_sumfree(o.k);
    const ModuliFlavor flavor = parse_moduli_flavor(o.flavor);
    Rational bound;
    std::uint64_t Q = o.Q;
    if (o.qmax != 0) {
        const auto best = optimize_Q(o.N, profile, flavor, 1, o.qmax);
        Q = best.Q;
        bound = best.bound;
    } else {
        SieveBoundQuery query;
        query.N = o.N;
        query.Q = o.Q;
        query.profile = profile;
        query.flavor = flavor;
        bound = sieve_bound(query);
    }
    out << "Q " << Q << "\n";
    out << "bound " << bound << " = " << format_real(to_double(bound)) << "\n";
    return 0;
}

int cmd_crosscheck(const Options& o, std::ostream& out) {
    const auto dir = oeis_directory();
    const auto manifest =
        SequenceManifest::load(o.manifest.empty() ? dir / "manifest.txt" : std::filesystem::path(o.manifest));
    std::vector<std::filesystem::path> files;
    for (const auto& f : o.bfiles) files.emplace_back(f);
    for (const auto& id : o.ids) {
        if (id.size() != 7 || id[0] != 'A') throw ArgumentError("bad OEIS id '" + id + "'");
        files.push_back(dir / ("b" + id.substr(1) + ".txt"));
    }
    if (files.empty()) {
        for (const auto& [id, rule] : manifest.rules) files.push_back(dir / ("b" + id.substr(1) + ".txt"));
    }
    CrosscheckOptions options;
    options.lo = o.lo;
    options.hi = o.hi;
    options.power = o.k;
    options.a_budget = Seconds(o.budget);
    int status = 0;
    for (const auto& path : files) {
        const BFile bfile = load_bfile(path);
        const auto report = crosscheck(bfile, manifest, options);
        out << report.id << ": checked " << report.checked << ", matched " << report.matches
            << ", mismatched " << report.mismatches.size() << ", unresolved " << report.unresolved
            << ", skipped " << report.skipped << "\n";
        for (const auto& m : report.mismatches) {
            out << "  index " << m.index << ": expected " << m.expected << ", computed " << m.computed << "\n";
        }
        if (!report.ok()) status = 1;
    }
    return status;
}

int cmd_verify_appendix(const Options& o, std::ostream& out) {
    const SqSieveCheck hand = verify_sqsieve_inequality(2, 2, {0}, 1, {1.0, 1.0, 1.0});
    out << "hand case p=2 S={0} A={1,2,3}: lhs " << format_real(hand.lhs) << ", rhs "
        << format_real(hand.rhs) << "\n";
    const auto summary = run_appendix_trials(o.trials, o.seed, {2, 3, 5, 7}, o.k);
    out << "trials " << summary.trials << ", inequality holds " << summary.holds
        << ", plancherel ok " << summary.plancherel_ok << "\n";
    out << "worst plancherel relative error " << format_real(summary.worst_plancherel_error) << "\n";
    out << "smallest relative margin " << format_real(summary.smallest_margin) << "\n";
    const bool ok = hand.holds && summary.holds == summary.trials && summary.plancherel_ok == summary.trials;
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Squarefree translates, admissible sets and large sieve bounds", "sqfree"};
    app.require_subcommand(1);
    Options o;
    std::function<int()> action;

    auto add_k = [&](CLI::App* sub) { sub->add_option("--k", o.k, "power k (k-free numbers)")->check(CLI::Range(2u, 64u)); };
    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "random seed"); };

    auto* sieve = app.add_subcommand("sieve-count", "count k-free numbers up to x");
    sieve->add_option("--x", o.x, "upper end")->required();
    add_k(sieve);
    sieve->callback([&] { action = [&] { return cmd_sieve_count(o, out); }; });

    auto* amax = app.add_subcommand("admissible-max", "A(x) by exact branch-and-bound");
    amax->add_option("--x", o.x, "single x");
    amax->add_option("--xmin", o.xmin, "range start");
    amax->add_option("--xmax", o.xmax, "range end");
    amax->add_option("--budget", o.budget, "seconds per x");
    amax->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    amax->add_flag("--bracket", o.bracket, "add shift lower bound and sieve upper bound");
    add_k(amax);
    amax->callback([&] { action = [&] { return cmd_admissible_max(o, out); }; });

    auto* fig = app.add_subcommand("figure-shift", "A(x) and |SF cap [x]| minus the main term");
    fig->add_option("--xmax", o.xmax, "largest x")->required()->check(CLI::PositiveNumber);
    fig->add_option("--budget", o.budget, "seconds per x");
    fig->add_option("--out", o.out_path, "CSV file (default stdout)");
    add_k(fig);
    fig->callback([&] { action = [&] { return cmd_figure_shift(o, out); }; });

    auto* named = app.add_subcommand("verify-named", "the sequences 2^j +- 1 and j! +- 1");
    named->add_option("--tag", o.tag, "A1, A2, A3 or A4")->required();
    named->add_option("--prefix", o.prefix, "number of terms")->required();
    named->add_option("--mode", o.mode, "terms, certificate, q-witness or q-prefix");
    named->add_option("--theta", o.theta, "W = prod_{p <= theta ln x} p^k");
    named->add_option("--strategy", o.strategy, "plain, half or crt (q-prefix)");
    named->add_option("--interval", o.interval, "half or forward (q-witness)");
    named->add_option("--order", o.order, "ascending or random");
    named->add_option("--prime-bound", o.prime_bound, "largest prime (certificate)");
    named->add_option("--prime-cutoff", o.prime_cutoff, "check only primes up to this cutoff");
    named->add_option("--max-candidates", o.max_candidates, "candidate budget");
    add_k(named);
    add_seed(named);
    named->callback([&] { action = [&] { return cmd_verify_named(o, out, err); }; });

    auto* construct = app.add_subcommand("construct", "explicit constructions");
    construct->require_subcommand(1);

    auto* cp = construct->add_subcommand("P", "slow-density sequence with property P");
    cp->add_option("--f", o.growth, "identity, linear:<c>, jlogj or const:<c>");
    cp->add_option("--count", o.count, "number of terms")->required();
    cp->add_option("--horizon", o.horizon, "largest index scanned for the levels");
    add_k(cp);
    cp->callback([&] { action = [&] { return cmd_construct_P(o, out); }; });

    auto* cg = construct->add_subcommand("greedy-sums", "greedy sequence with k-free pairwise sums");
    cg->add_option("--count", o.count, "number of terms")->required();
    cg->add_flag("--no-diagonal", o.no_diagonal, "exempt a + a");
    cg->add_flag("--skips", o.show_skips, "log every rejected candidate");
    add_k(cg);
    cg->callback([&] { action = [&] { return cmd_construct_greedy(o, out); }; });

    auto* cd = construct->add_subcommand("dense-q", "anchor iteration for dense property Q");
    cd->add_option("--n1", o.n1, "initial anchor");
    cd->add_option("--x", o.x, "search multiples of W in [x/2, x]")->required();
    cd->add_option("--steps", o.steps, "steps after the initial anchor");
    cd->add_option("--epsilon", o.epsilon, "grid ratio 1 + epsilon");
    cd->add_option("--order", o.order, "ascending or random");
    cd->add_option("--grid-cap", o.grid_cap, "largest R on the grid");
    cd->add_option("--max-candidates", o.max_candidates, "candidate budget");
    add_k(cd);
    add_seed(cd);
    cd->callback([&] { action = [&] { return cmd_construct_dense(o, out); }; });

    auto* cs = construct->add_subcommand("sample-counter", "random admissible set");
    cs->add_option("--C", o.C, "constant in mu_n");
    cs->add_option("--xmax", o.xmax, "sample from [3, xmax]")->required();
    cs->add_flag("--list", o.list, "print the elements");
    cs->add_flag("--probe", o.probe, "residue occupancy for p <= ln xmax");
    add_k(cs);
    add_seed(cs);
    cs->callback([&] { action = [&] { return cmd_construct_sample(o, out); }; });

    auto* co = construct->add_subcommand("overp", "base points n = 0 mod p^k (p <= P)");
    co->add_option("--P", o.P, "single threshold P");
    co->add_option("--K", o.K, "thresholds ceil(K exp exp j)");
    co->add_option("--depth", o.depth, "number of anchors");
    co->add_option("--thresholds", o.thresholds, "custom threshold schedule");
    co->add_option("--candidates", o.candidate_budget, "candidate budget per anchor");
    co->add_option("--prime-cap", o.prime_cap, "largest prime checked");
    co->add_option("--induced-cap", o.induced_cap, "induced set range");
    co->add_option("--bits", o.bigint_bits, "size budget for the modulus in bits");
    co->add_flag("--list", o.list, "print the induced set");
    add_k(co);
    co->callback([&] { action = [&] { return cmd_construct_overp(o, out); }; });

    auto* sb = app.add_subcommand("sieve-bound", "large sieve bound (N + Q^2e) / sum h(q)");
    sb->add_option("--N", o.N, "interval length")->required();
    sb->add_option("--Q", o.Q, "sieve level");
    sb->add_option("--qmax", o.qmax, "minimise over Q in [1, qmax]");
    sb->add_option("--profile", o.profile, "one or es-sumfree");
    sb->add_option("--flavor", o.flavor, "power or linear");
    add_k(sb);
    sb->callback([&] { action = [&] { return cmd_sieve_bound(o, out); }; });

    auto* cc = app.add_subcommand("crosscheck", "compare against OEIS b-files");
    cc->add_option("--id", o.ids, "OEIS id, looked up in the data directory");
    cc->add_option("--bfile", o.bfiles, "explicit b-file path");
    cc->add_option("--manifest", o.manifest, "offset manifest");
    cc->add_option("--lo", o.lo, "smallest index");
    cc->add_option("--hi", o.hi, "largest index");
    cc->add_option("--budget", o.budget, "seconds per A(x)");
    add_k(cc);
    cc->callback([&] { action = [&] { return cmd_crosscheck(o, out); }; });

    auto* va = app.add_subcommand("verify-appendix", "numeric check of the prime-power sieve inequality");
    va->add_option("--trials", o.trials, "random instances");
    add_seed(va);
    add_k(va);
    va->callback([&] { action = [&] { return cmd_verify_appendix(o, out); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace sqfree
