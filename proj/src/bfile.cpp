#include "sqfree/experiments.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

namespace sqfree {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

BFile parse_oeis_bfile(const std::string& text, const std::string& id, const std::string& source) {
    static const std::regex line_re(R"(^(-?\d+)[ \t]+(-?\d+)$)");
    BFile bfile;
    bfile.id = id;
    bfile.source = source;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::optional<std::int64_t> previous;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::smatch m;
        if (!std::regex_match(line, m, line_re)) {
            throw ParseError(line_no, "expected '<index> <value>', got '" + line + "'");
        }
        std::int64_t index = 0;
        try {
            index = std::stoll(m[1].str());
        } catch (const std::out_of_range&) {
            throw ParseError(line_no, "index out of range");
        }
        if (bfile.entries.count(index)) {
            throw FormatError("duplicate index " + std::to_string(index) + " at line " +
                              std::to_string(line_no));
        }
        if (previous && index < *previous) {
            throw FormatError("index " + std::to_string(index) + " at line " +
                              std::to_string(line_no) + " is not increasing");
        }
        previous = index;
        bfile.entries.emplace(index, BigInt(m[2].str()));
    }
    return bfile;
}

std::string emit_bfile(const BFile& bfile) {
    std::string out;
    for (const auto& [index, value] : bfile.entries) {
        out += std::to_string(index) + " " + value.str() + "\n";
    }
    return out;
}

BFile load_bfile(const std::filesystem::path& path) {
    std::string id = path.stem().string();
    static const std::regex name_re(R"(^b(\d{6})$)");
    std::smatch m;
    if (std::regex_match(id, m, name_re)) id = "A" + m[1].str();
    return parse_oeis_bfile(read_file(path), id, path.string());
}

std::filesystem::path oeis_directory() {
    if (const char* env = std::getenv("SQFREE_OEIS_DIR"); env && *env) return env;
    return std::filesystem::path(SQFREE_DATA_DIR) / "oeis";
}

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::SfCount: return "sf_count";
        case Quantity::AOfX: return "a_of_x";
        case Quantity::NamedTerm: return "named_term";
        case Quantity::SfNth: return "sf_nth";
    }
    return "?";
}

const ManifestRule& SequenceManifest::rule(const std::string& id) const {
    auto it = rules.find(id);
    if (it == rules.end()) throw ConfigError("no manifest rule for " + id);
    return it->second;
}

SequenceManifest SequenceManifest::parse(const std::string& text) {
    SequenceManifest manifest;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigError("manifest line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        ManifestRule rule;
        std::string quantity;
        if (!(fields >> rule.id >> quantity)) fail("expected '<id> <quantity> ...'");
        if (quantity == "sf_count") rule.quantity = Quantity::SfCount;
        else if (quantity == "a_of_x") rule.quantity = Quantity::AOfX;
        else if (quantity == "named_term") rule.quantity = Quantity::NamedTerm;
        else if (quantity == "sf_nth") rule.quantity = Quantity::SfNth;
        else fail("unknown quantity '" + quantity + "'");
        std::string option;
        while (fields >> option) {
            const auto eq = option.find('=');
            if (eq == std::string::npos) fail("expected key=value, got '" + option + "'");
            const std::string key = option.substr(0, eq), value = option.substr(eq + 1);
            try {
                if (key == "tag") rule.tag = parse_sequence_tag(value);
                else if (key == "shift") rule.shift = std::stoll(value);
                else if (key == "first") rule.first = std::stoll(value);
                else fail("unknown key '" + key + "'");
            } catch (const ArgumentError& e) {
                fail(e.what());
            } catch (const std::logic_error&) {
                fail("bad number in '" + option + "'");
            }
        }
        if (rule.quantity == Quantity::NamedTerm && !rule.tag) fail("named_term needs tag=");
        if (manifest.rules.count(rule.id)) fail("second rule for " + rule.id);
        manifest.rules.emplace(rule.id, rule);
    }
    return manifest;
}

SequenceManifest SequenceManifest::load(const std::filesystem::path& path) {
    return parse(read_file(path));
}

}  // namespace sqfree
