// arw: command-line front end for the ARW engine and the Monte Carlo harness.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arw/carpet/engine.hpp"
#include "arw/carpet/render.hpp"
#include "arw/core/philox.hpp"
#include "arw/core/stabilize.hpp"
#include "arw/mc/estimators.hpp"
#include "arw/mc/experiment.hpp"
#include "arw/mc/export.hpp"
#include "arw/mc/spec_file.hpp"
#include "arw/mc/ytilde.hpp"

namespace {

using namespace arw;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBudget = 2;
constexpr int kExitCheck = 3;

struct PropertyCheckFailed {
    std::string ids;
    std::string where;
};

std::string join(const std::vector<carpet::Property>& props) {
    std::string out;
    for (carpet::Property p : props) {
        if (!out.empty()) out += ',';
        out += carpet::to_string(p);
    }
    return out;
}

std::string hex(std::uint64_t x) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

struct Options {
    std::int64_t n = 4;
    std::int64_t a = 4;
    std::int64_t ring = 0;
    double sleep_rate = 0.5;
    double zeta = 0.97;
    std::uint64_t seed = 0;
    std::uint64_t replicas = 1;
    std::int64_t max_modes = 1000;
    std::uint64_t budget = kDefaultInstructionBudget;
    std::string out;
    bool check = false;
    bool trace = false;
    bool dump = false;
    bool holes = false;
    unsigned threads = 0;
    std::int64_t v = 1;
    std::int64_t block_size = 16;
    std::uint64_t samples = 0;
    std::string spec_path;
};

void add_seed(CLI::App* cmd, Options& o, bool required) {
    auto* opt = cmd->add_option("--seed", o.seed, "master seed")->envname("ARW_SEED");
    if (required) opt->required();
}

void add_budget(CLI::App* cmd, Options& o) {
    cmd->add_option("--budget", o.budget, "instruction budget")->capture_default_str();
}

void add_cell(CLI::App* cmd, Options& o) {
    cmd->add_option("--n", o.n, "number of non-sink blocks (even)")->capture_default_str();
    cmd->add_option("--a", o.a, "hole span; blocks have a^2 sites (even, >= 4)")->capture_default_str();
    cmd->add_option("--lambda", o.sleep_rate, "sleep rate")->capture_default_str();
    cmd->add_option("--zeta", o.zeta, "initial density")->capture_default_str();
}

int cmd_stabilize(const Options& o) {
    if (o.ring < 1) throw ParameterError("--N must be positive");
    if (!(o.sleep_rate >= 0.0)) throw ParameterError("lambda must be non-negative");
    Configuration start = Configuration::bernoulli(o.ring, o.zeta, derive_seed(o.seed, 0, 0));
    InstructionTapes tapes(derive_seed(o.seed, 1, 0), o.sleep_rate, o.ring);
    ArwSystem system(start, std::move(tapes), o.budget);
    if (o.trace) system.set_trace(&std::cerr);
    const StabilizeRun run = stabilize(system);

    const OdometerMap& odo = system.odometer();
    std::cout << "N " << o.ring << '\n'
              << "particles " << start.total_particles() << '\n'
              << "J " << system.jumps() << '\n'
              << "instructions " << system.instructions() << '\n'
              << "odometer_total " << odo.total() << '\n'
              << "odometer_max " << odo.max() << '\n'
              << "sites_toppled " << odo.sites_toppled() << '\n'
              << "final_particles " << system.config().total_particles() << '\n'
              << "final_digest " << hex(system.config().digest()) << '\n'
              << "status " << (run.status == StabilizeStatus::Stable ? "stable" : "budget") << '\n';
    return run.status == StabilizeStatus::Stable ? kExitOk : kExitBudget;
}

int cmd_modes(const Options& o) {
    const mc::GridCell cell{o.n, o.a, o.sleep_rate, o.zeta};
    mc::ExperimentSpec spec;
    spec.cells = {cell};
    spec.replicas = 1;
    spec.max_modes = o.max_modes;
    spec.validate();

    mc::ReplicaHooks hooks;
    if (o.check) {
        hooks.after_attempt = [](const carpet::CarpetProcedure& proc, const carpet::HoleRecord& h) {
            const auto bad = proc.assert_properties();
            if (!bad.empty()) {
                throw PropertyCheckFailed{join(bad), "mode " + std::to_string(h.mode) + ", block " +
                                                         std::to_string(h.block) + ", attempt " +
                                                         std::to_string(h.attempt)};
            }
        };
    }
    if (o.dump) {
        hooks.at_start = [](const carpet::CarpetProcedure& proc) { std::cout << carpet::render_state(proc) << '\n'; };
        hooks.after_mode = [](const carpet::CarpetProcedure& proc, const carpet::ModeReport&) {
            std::cout << carpet::render_state(proc) << '\n';
        };
    }

    mc::ReplicaResult r = mc::run_replica(cell, o.seed, o.max_modes, o.budget, o.holes, hooks);
    for (const carpet::ModeReport& m : r.mode_reports) {
        std::cout << "mode " << m.mode << ": emissions " << m.emissions << ", failures " << m.failures << ", free "
                  << m.free << ", frozen " << m.frozen << ", defects " << m.defects << ", J_delta " << m.jumps
                  << ", condition1 " << (m.condition1 ? "yes" : "no") << '\n';
    }
    std::cout << "modes " << r.modes << '\n'
              << "terminated_by " << mc::to_string(r.terminated_by) << '\n'
              << "J_total " << r.total_jumps
              << (r.terminated_by == mc::Termination::Budget ? " (lower bound)" : "") << '\n';
    if (!o.out.empty()) {
        const mc::ExportedFiles files = mc::export_results({r}, o.out);
        std::cout << "wrote " << files.modes.string() << '\n';
    }
    // Running out of budget in the final stabilization only makes J a lower
    // bound; the mode cycle itself completed.
    return r.mode_truncated ? kExitBudget : kExitOk;
}

int cmd_sweep(Options o, bool seed_given, bool out_given, bool threads_given, bool budget_given) {
    mc::ExperimentSpec spec = mc::load_experiment_spec(o.spec_path);
    if (seed_given) spec.master_seed = o.seed;
    if (out_given) spec.output = o.out;
    if (threads_given) spec.threads = o.threads;
    if (budget_given) spec.budget = o.budget;

    const std::vector<mc::ReplicaResult> results = mc::run_replicas(spec);
    const mc::ExportedFiles files = mc::export_results(results, spec.output);

    std::cout << "N,mean_J,std_error,mean_modes,budget_limited\n";
    std::uint64_t limited = 0;
    for (const mc::JumpsRow& row : mc::sweep_J_vs_N(results)) {
        std::cout << row.ring_size << ',' << mc::format_double(row.mean_jumps) << ','
                  << mc::format_double(row.std_error) << ',' << mc::format_double(row.mean_modes) << ','
                  << row.budget_limited << '\n';
        limited += row.budget_limited;
    }
    std::cout << "wrote " << files.replicas.string() << '\n';
    if (limited > 0) {
        std::cerr << "warning: " << limited << " replica(s) hit the instruction budget; their J is a lower bound\n";
    }
    return kExitOk;
}

int cmd_ytilde(const Options& o) {
    const mc::YtildeDist dist = mc::ytilde_pmf(o.v, o.sleep_rate, o.block_size);
    std::cout << "value,probability\n";
    for (std::size_t j = 0; j < dist.pmf.size(); ++j) {
        std::cout << mc::YtildeDist::value_at(j) << ',' << mc::format_double(dist.pmf[j]) << '\n';
    }
    std::cout << "mean " << mc::format_double(mc::ytilde_mean(dist)) << '\n';
    if (o.samples > 0) {
        const mc::SampleMean s = mc::ytilde_sample_mean(dist, o.samples, o.seed);
        std::cout << "sample_mean " << mc::format_double(s.mean) << " +- " << mc::format_double(s.std_error) << '\n';
    }
    return kExitOk;
}

int cmd_drift(const Options& o) {
    mc::ExperimentSpec spec;
    spec.cells = {mc::GridCell{o.n, o.a, o.sleep_rate, o.zeta}};
    spec.replicas = o.replicas;
    spec.master_seed = o.seed;
    spec.max_modes = o.max_modes;
    spec.budget = o.budget;
    spec.record_holes = true;
    spec.threads = o.threads;
    const std::vector<mc::ReplicaResult> results = mc::run_replicas(spec);

    std::vector<carpet::HoleRecord> records;
    for (const mc::ReplicaResult& r : results) records.insert(records.end(), r.holes.begin(), r.holes.end());
    const std::string jsonl = mc::hole_jsonl(records);

    std::ostream& summary = o.out.empty() ? std::cerr : std::cout;
    if (o.out.empty()) {
        std::cout << jsonl;
    } else {
        std::filesystem::create_directories(o.out);
        const std::filesystem::path path = std::filesystem::path(o.out) / "holes.jsonl";
        mc::write_text(path, jsonl);
        summary << "wrote " << path.string() << '\n';
    }

    const auto stats = mc::hole_drift_stats(records, o.a);
    if (!stats) {
        summary << "no attempted emissions\n";
        return kExitOk;
    }
    summary << "class,count,mean_dH,P(H>a/2)\n";
    for (const auto& [name, s] : stats->by_class) {
        summary << name << ',' << s.count << ',' << mc::format_double(s.mean_delta) << ','
                << mc::format_double(s.exceed_fraction) << '\n';
    }
    return kExitOk;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
    for (const std::string& a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
}

// Expands `--config FILE` into flags placed right after the subcommand name.
// Flags on the command line win; so does ARW_SEED over a seed in the file.
std::vector<std::string> expand_config(const CLI::App& app, std::vector<std::string> args) {
    if (args.size() < 2) return args;
    const CLI::App* sub = app.get_subcommand_no_throw(args[1]);
    if (sub == nullptr) return args;

    std::string file;
    for (std::size_t i = 2; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
        }
    }
    if (file.empty()) return args;

    std::vector<std::string> injected;
    for (const mc::KeyValue& kv : mc::parse_key_values(mc::read_text(file))) {
        const std::string flag = "--" + kv.key;
        if (kv.key == "config" || sub->get_option_no_throw(flag) == nullptr) {
            throw mc::SpecFileError(kv.line, "unknown key '" + kv.key + "' for " + sub->get_name());
        }
        if (given_on_command_line(args, flag)) continue;
        if (kv.key == "seed" && std::getenv("ARW_SEED") != nullptr) continue;
        injected.push_back(flag + "=" + kv.value);
    }
    args.insert(args.begin() + 2, injected.begin(), injected.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Activated random walk simulator on Z_N"};
    app.require_subcommand(1);
    Options o;

    auto* stab = app.add_subcommand("stabilize", "greedy stabilization of a Bernoulli start");
    stab->add_option("--config", "key = value file; flags override it");
    stab->add_option("--N", o.ring, "ring size")->required();
    stab->add_option("--zeta", o.zeta, "initial density")->required();
    stab->add_option("--lambda", o.sleep_rate, "sleep rate")->required();
    add_seed(stab, o, true);
    add_budget(stab, o);
    stab->add_flag("--trace", o.trace, "per-toppling trace on stderr");

    auto* modes = app.add_subcommand("modes", "carpet procedure, one replica");
    modes->add_option("--config", "key = value file; flags override it");
    add_cell(modes, o);
    add_seed(modes, o, true);
    add_budget(modes, o);
    modes->add_option("--max-modes", o.max_modes, "mode limit")->capture_default_str();
    modes->add_option("--out", o.out, "directory for replicas.csv, modes.csv, flows.csv");
    modes->add_flag("--check", o.check, "check P1-P10 after every attempted emission");
    modes->add_flag("--dump", o.dump, "print the state after every mode");
    modes->add_flag("--holes", o.holes, "also write holes.jsonl");

    auto* sweep = app.add_subcommand("sweep", "replicas over a parameter grid");
    sweep->add_option("spec", o.spec_path, "key = value spec file")->required();
    auto* sweep_seed = sweep->add_option("--seed", o.seed, "override the spec's seed")->envname("ARW_SEED");
    auto* sweep_out = sweep->add_option("--out", o.out, "override the output directory");
    auto* sweep_threads = sweep->add_option("--threads", o.threads, "worker threads (0: all cores)");
    auto* sweep_budget = sweep->add_option("--budget", o.budget, "override the instruction budget");

    auto* ytilde = app.add_subcommand("ytilde", "reference hole-step law");
    ytilde->add_option("--config", "key = value file; flags override it");
    ytilde->add_option("--v", o.v, "lowest value is -v")->required();
    ytilde->add_option("--lambda", o.sleep_rate, "sleep rate")->required();
    ytilde->add_option("--K", o.block_size, "block size")->required();
    ytilde->add_option("--samples", o.samples, "Monte Carlo samples (0: none)");
    add_seed(ytilde, o, false);

    auto* drift = app.add_subcommand("drift", "hole trace JSONL and drift summary");
    drift->add_option("--config", "key = value file; flags override it");
    add_cell(drift, o);
    add_seed(drift, o, true);
    add_budget(drift, o);
    drift->add_option("--replicas", o.replicas, "replicas")->capture_default_str();
    drift->add_option("--max-modes", o.max_modes, "mode limit")->capture_default_str();
    drift->add_option("--out", o.out, "directory for holes.jsonl (default: stdout)");
    drift->add_option("--threads", o.threads, "worker threads (0: all cores)");

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(app, std::move(args));
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    std::vector<char*> expanded;
    for (std::string& a : args) expanded.push_back(a.data());

    try {
        app.parse(static_cast<int>(expanded.size()), expanded.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*stab) return cmd_stabilize(o);
        if (*modes) return cmd_modes(o);
        if (*sweep) {
            return cmd_sweep(o, sweep_seed->count() > 0, sweep_out->count() > 0, sweep_threads->count() > 0,
                             sweep_budget->count() > 0);
        }
        if (*ytilde) return cmd_ytilde(o);
        if (*drift) return cmd_drift(o);
    } catch (const PropertyCheckFailed& e) {
        std::cerr << "property check failed: " << e.ids << " (" << e.where << ")\n";
        return kExitCheck;
    } catch (const EngineInvariantViolation& e) {
        std::cerr << "engine invariant violated: " << e.what() << '\n';
        return kExitCheck;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const BudgetExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const mc::ExportError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
