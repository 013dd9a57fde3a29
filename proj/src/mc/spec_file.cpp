#include "arw/mc/spec_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace arw::mc {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view text, const KeyValue& kv) {
    T value{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
        throw SpecFileError(kv.line, "cannot parse '" + std::string(text) + "' as a number for key '" + kv.key + "'");
    }
    return value;
}

template <class T>
std::vector<T> parse_list(const KeyValue& kv) {
    std::vector<T> out;
    for (std::string_view item : split_list(kv.value)) out.push_back(parse_number<T>(item, kv));
    return out;
}

bool parse_bool(const KeyValue& kv) {
    if (kv.value == "true" || kv.value == "1" || kv.value == "yes") return true;
    if (kv.value == "false" || kv.value == "0" || kv.value == "no") return false;
    throw SpecFileError(kv.line, "expected true or false for key '" + kv.key + "'");
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::string_view text) {
    std::vector<KeyValue> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw SpecFileError(line_no, "expected 'key = value'");
        KeyValue kv{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
        if (kv.key.empty()) throw SpecFileError(line_no, "missing key before '='");
        if (kv.value.empty()) throw SpecFileError(line_no, "missing value for key '" + kv.key + "'");
        out.push_back(std::move(kv));
    }
    return out;
}

ExperimentSpec parse_experiment_spec(std::string_view text) {
    const std::vector<KeyValue> entries = parse_key_values(text);
    if (entries.empty()) throw SpecFileError(1, "spec file has no entries");

    std::map<std::string, const KeyValue*> seen;
    for (const KeyValue& kv : entries) {
        if (seen.count(kv.key) != 0) throw SpecFileError(kv.line, "duplicate key '" + kv.key + "'");
        seen[kv.key] = &kv;
    }
    for (const char* required : {"n", "a", "lambda", "zeta", "seed"}) {
        if (seen.count(required) == 0) {
            throw SpecFileError(entries.back().line, std::string("missing required key '") + required + "'");
        }
    }

    ExperimentSpec spec;
    std::vector<std::int64_t> ns, as;
    std::vector<double> lambdas, zetas;
    for (const KeyValue& kv : entries) {
        if (kv.key == "n") {
            ns = parse_list<std::int64_t>(kv);
        } else if (kv.key == "a") {
            as = parse_list<std::int64_t>(kv);
        } else if (kv.key == "lambda") {
            lambdas = parse_list<double>(kv);
        } else if (kv.key == "zeta") {
            zetas = parse_list<double>(kv);
        } else if (kv.key == "seed") {
            spec.master_seed = parse_number<std::uint64_t>(kv.value, kv);
        } else if (kv.key == "replicas") {
            spec.replicas = parse_number<std::uint64_t>(kv.value, kv);
        } else if (kv.key == "max-modes") {
            spec.max_modes = parse_number<std::int64_t>(kv.value, kv);
        } else if (kv.key == "budget") {
            spec.budget = parse_number<std::uint64_t>(kv.value, kv);
        } else if (kv.key == "out") {
            spec.output = kv.value;
        } else if (kv.key == "threads") {
            spec.threads = parse_number<unsigned>(kv.value, kv);
        } else if (kv.key == "holes") {
            spec.record_holes = parse_bool(kv);
        } else {
            throw SpecFileError(kv.line, "unknown key '" + kv.key + "'");
        }
    }
    spec.cells = ExperimentSpec::grid(ns, as, lambdas, zetas);
    try {
        spec.validate();
    } catch (const SpecFileError&) {
        throw;
    } catch (const ParameterError& e) {
        throw SpecFileError(seen.at("n")->line, e.what());
    }
    return spec;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) { return parse_experiment_spec(read_text(path)); }

}  // namespace arw::mc
