#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "arw/mc/estimators.hpp"
#include "arw/mc/excursion.hpp"
#include "arw/mc/experiment.hpp"
#include "arw/mc/export.hpp"
#include "arw/mc/spec_file.hpp"
#include "arw/mc/ytilde.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace arw;
using namespace arw::mc;

namespace {

// Exact rational arithmetic for the pmf oracle.
struct Q {
    std::int64_t num = 0;
    std::int64_t den = 1;
    Q(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) {
        const std::int64_t g = std::gcd(num, den);
        num /= g;
        den /= g;
        if (den < 0) num = -num, den = -den;
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
Q operator+(Q a, Q b) { return Q(a.num * b.den + b.num * a.den, a.den * b.den); }
Q operator-(Q a, Q b) { return Q(a.num * b.den - b.num * a.den, a.den * b.den); }
Q operator*(Q a, Q b) { return Q(a.num * b.num, a.den * b.den); }
Q operator/(Q a, Q b) { return Q(a.num * b.den, a.den * b.num); }
bool operator==(Q a, Q b) { return a.num == b.num && a.den == b.den; }

struct RationalLaw {
    std::vector<Q> pmf;  // values 1, 0, -1, ..., -v
    Q mean;
};

RationalLaw oracle(std::int64_t v, Q lambda, std::int64_t k) {
    const Q one(1);
    const Q c = one / (Q(2) * (one + lambda));
    const Q delta = one / (Q(k) * (one + lambda));
    RationalLaw law;
    law.pmf.push_back(lambda / (one + lambda));
    law.pmf.push_back(c + delta);
    for (std::int64_t j = 1; j < v; ++j) law.pmf.push_back(c / Q(j * (j + 1)));
    law.pmf.push_back(c / Q(v) - delta);
    for (std::size_t j = 0; j < law.pmf.size(); ++j) {
        law.mean = law.mean + Q(1 - static_cast<std::int64_t>(j)) * law.pmf[j];
    }
    return law;
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("arw_test_mc_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

ExperimentSpec small_spec() {
    ExperimentSpec spec;
    spec.cells = ExperimentSpec::grid({2, 4}, {4}, {1.0}, {0.9});
    spec.replicas = 3;
    spec.master_seed = 17;
    spec.max_modes = 5;
    spec.budget = 2'000'000;
    spec.threads = 1;
    return spec;
}

}  // namespace

TEST_CASE("ytilde pmf against exact rationals") {
    for (const Q lambda : {Q(1, 4), Q(1), Q(4)}) {
        for (const std::int64_t k : {16, 36}) {
            const auto a = static_cast<std::int64_t>(std::lround(std::sqrt(static_cast<double>(k))));
            for (std::int64_t v = 1; v <= a; ++v) {
                CAPTURE(v);
                CAPTURE(k);
                const RationalLaw exact = oracle(v, lambda, k);
                Q total;
                for (const Q& p : exact.pmf) total = total + p;
                REQUIRE(total == Q(1));

                const YtildeDist d = ytilde_pmf(v, lambda.value(), k);
                REQUIRE(d.pmf.size() == exact.pmf.size());
                for (std::size_t j = 0; j < d.pmf.size(); ++j) {
                    CHECK(std::abs(d.pmf[j] - exact.pmf[j].value()) < 1e-15);
                    CHECK(d.probability(YtildeDist::value_at(j)) == d.pmf[j]);
                }
                CHECK(std::abs(ytilde_mean(d) - exact.mean.value()) < 1e-14);
                CHECK(std::abs(ytilde_mean_closed_form(v, lambda.value(), k) - exact.mean.value()) < 1e-14);
            }
        }
    }
}

TEST_CASE("ytilde spot value") {
    CHECK(oracle(2, Q(1), 16).mean == Q(3, 16));
    CHECK(std::abs(ytilde_mean(ytilde_pmf(2, 1.0, 16)) - 3.0 / 16.0) < 1e-15);
    CHECK(ytilde_pmf(2, 1.0, 16).delta == 1.0 / 32.0);
}

TEST_CASE("ytilde mean is nonincreasing in v") {
    for (double lambda : {0.25, 1.0, 4.0}) {
        double previous = ytilde_mean(ytilde_pmf(1, lambda, 36));
        for (std::int64_t v = 2; v <= 6; ++v) {
            const double m = ytilde_mean(ytilde_pmf(v, lambda, 36));
            CHECK(m <= previous);
            previous = m;
        }
    }
}

TEST_CASE("ytilde parameter errors") {
    CHECK_THROWS_AS(ytilde_pmf(0, 1.0, 16), ParameterError);
    CHECK_THROWS_AS(ytilde_pmf(2, -1.0, 16), ParameterError);
    CHECK_THROWS_AS(ytilde_pmf(2, 1.0, 0), ParameterError);
    CHECK_THROWS_AS(ytilde_pmf(1, 0.0, 1), ParameterError);  // P(-1) = 1/2 - 1
    CHECK_NOTHROW(ytilde_pmf(8, 1.0, 16));                    // P(-8) = 1/32 - 1/32 = 0
    CHECK_THROWS_AS(ytilde_pmf(9, 1.0, 16), ParameterError);  // P(-9) = 1/36 - 1/32
}

TEST_CASE("ytilde sampling") {
    const YtildeDist d = ytilde_pmf(3, 1.0, 16);
    const SampleMean s = ytilde_sample_mean(d, 100000, 5);
    CHECK(s.samples == 100000);
    CHECK(std::abs(s.mean - ytilde_mean(d)) < 3 * s.std_error);
    CHECK(ytilde_sample_mean(d, 1000, 5).mean == ytilde_sample_mean(d, 1000, 5).mean);
}

TEST_CASE("excursion law") {
    CHECK(ExcursionLaw::theoretical(1) == 0.5);
    CHECK(ExcursionLaw::theoretical(2) == doctest::Approx(1.0 / 6.0));
    double tail = 0.0;
    for (std::int64_t k = 1; k <= 100000; ++k) tail += ExcursionLaw::theoretical(k);
    CHECK(tail == doctest::Approx(1.0 - 1.0 / 100001.0));

    const ExcursionLaw law = excursion_min_law(100000, 3);
    CHECK(law.samples == 100000);
    CHECK(law.right_first > 0);
    for (std::int64_t k = 1; k <= 5; ++k) {
        CAPTURE(k);
        CHECK(std::abs(law.frequency(k) - ExcursionLaw::theoretical(k)) < 3 * law.sigma(k));
    }
    std::uint64_t total = law.deeper;
    for (std::uint64_t c : law.counts) total += c;
    CHECK(total == law.samples);
}

TEST_CASE("Wilson intervals") {
    const Interval all = wilson_interval(20, 20);
    CHECK(all.upper == 1.0);
    CHECK(all.lower > 0.8);
    const Interval none = wilson_interval(0, 0);
    CHECK(none.lower == 0.0);
    CHECK(none.upper == 1.0);
    // Width scales like 1/sqrt(n).
    const Interval a = wilson_interval(50, 100);
    const Interval b = wilson_interval(200, 400);
    CHECK((a.upper - a.lower) / (b.upper - b.lower) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("mode success estimates") {
    ReplicaResult r;
    r.cell_index = 0;
    for (int m = 0; m < 4; ++m) {
        carpet::ModeReport rep;
        rep.condition1 = true;
        r.mode_reports.push_back(rep);
    }
    ReplicaResult idle;
    idle.cell_index = 1;
    const auto est = estimate_mode_success({r, idle});
    REQUIRE(est.size() == 2);
    CHECK(est[0].estimate == 1.0);
    CHECK(est[0].total == 4);
    CHECK_FALSE(est[1].estimate.has_value());
}

TEST_CASE("hole drift statistics") {
    CHECK_FALSE(hole_drift_stats({}, 4));
    std::vector<carpet::HoleRecord> flat(5);
    for (auto& h : flat) h.steps = 2;
    const auto s = hole_drift_stats(flat, 4);
    REQUIRE(s);
    CHECK(s->by_position.at(0).mean_delta == 0.0);
    CHECK(s->by_position.at(0).exceed_fraction == 0.0);
    CHECK(s->by_class.at("[0,a/3]").count == 5);
    CHECK(s->steps_histogram.at(2) == 5);
}

TEST_CASE("log-jump fit") {
    std::vector<JumpsRow> rows;
    for (std::int64_t n : {10, 20, 30}) {
        JumpsRow r;
        r.ring_size = n;
        r.mean_jumps = 3.0 * std::exp(0.1 * static_cast<double>(n));
        rows.push_back(r);
    }
    const auto fit = fit_log_jumps(rows);
    REQUIRE(fit);
    CHECK(fit->slope == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(fit->intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK_FALSE(fit_log_jumps({rows[0]}));
}

TEST_CASE("replicas are deterministic and scheduling-independent") {
    ExperimentSpec spec = small_spec();
    const auto serial = run_replicas(spec);
    spec.threads = 4;
    const auto parallel = run_replicas(spec);
    REQUIRE(serial.size() == 6);
    CHECK(replica_csv(serial) == replica_csv(parallel));
    CHECK(mode_csv(serial) == mode_csv(parallel));
    CHECK(flow_csv(serial) == flow_csv(parallel));
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].cell_index == i / 3);
        CHECK(serial[i].replica == i % 3);
        CHECK(serial[i].seed == replica_seed(17, i / 3, i % 3));
    }
}

TEST_CASE("replica accounting") {
    const auto results = run_replicas(small_spec());
    for (const ReplicaResult& r : results) {
        CHECK(r.conserved);
        CHECK(r.modes <= 5);
        CHECK(static_cast<std::int64_t>(r.mode_reports.size()) == r.modes);
        CHECK((r.total_jumps >= static_cast<std::uint64_t>(r.modes) || r.terminated_by == Termination::Budget));
        std::uint64_t mode_jumps = 0;
        for (const auto& m : r.mode_reports) mode_jumps += m.jumps;
        if (!r.mode_truncated) CHECK(mode_jumps + r.residual_jumps == r.total_jumps);
    }
    const auto rows = sweep_J_vs_N(results);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].ring_size == 64);
    CHECK(rows[1].ring_size == 96);
}

TEST_CASE("zero modes is initialization plus finalize") {
    ExperimentSpec spec;
    spec.cells = {GridCell{2, 4, 1.0, 0.5}};
    spec.replicas = 1;
    spec.max_modes = 0;
    spec.master_seed = 3;
    const auto results = run_replicas(spec);
    REQUIRE(results.size() == 1);
    CHECK(results[0].modes == 0);
    CHECK(results[0].procedure_jumps == 0);
    CHECK(results[0].total_jumps == results[0].residual_jumps);
    CHECK(results[0].terminated_by == Termination::MaxModes);
}

TEST_CASE("initial defect counts follow the binomial law") {
    // n = 4, a = 4: 90 non-hole sites, each empty with probability 0.03.
    constexpr int kSites = 90;
    constexpr double kEmpty = 0.03;
    double p_at_most_n = 0.0;
    for (int d = 0; d <= 4; ++d) {
        double term = std::pow(kEmpty, d) * std::pow(1 - kEmpty, kSites - d);
        for (int i = 0; i < d; ++i) term *= static_cast<double>(kSites - i) / (i + 1);
        p_at_most_n += term;
    }
    constexpr int kReplicas = 2000;
    int hits = 0;
    const auto lay = carpet::build_layout(4, 4);
    for (int r = 0; r < kReplicas; ++r) {
        const auto proc = carpet::CarpetProcedure::init_first_mode(0.97, lay, 0.5, replica_seed(1, 0, r));
        hits += proc.defect_count() <= 4;
    }
    const double freq = hits / double(kReplicas);
    CHECK(std::abs(freq - p_at_most_n) < 4 * std::sqrt(p_at_most_n * (1 - p_at_most_n) / kReplicas));
    CHECK(p_at_most_n > 0.8);
}

TEST_CASE("export") {
    SUBCASE("empty results give header-only files") {
        const auto dir = scratch_dir("empty");
        const ExportedFiles f = export_results({}, dir);
        CHECK(slurp(f.replicas) == std::string(kReplicaCsvHeader) + "\n");
        CHECK(slurp(f.modes) == std::string(kModeCsvHeader) + "\n");
        CHECK(slurp(f.flows) == std::string(kFlowCsvHeader) + "\n");
        CHECK(f.holes.empty());
        std::filesystem::remove_all(dir);
    }
    SUBCASE("re-export is byte-identical; one row per replica") {
        ExperimentSpec spec = small_spec();
        spec.record_holes = true;
        const auto results = run_replicas(spec);
        const auto dir = scratch_dir("twice");
        const ExportedFiles first = export_results(results, dir);
        const std::string replicas = slurp(first.replicas);
        const std::string modes = slurp(first.modes);
        const std::string holes = slurp(first.holes);
        const ExportedFiles second = export_results(results, dir);
        CHECK(slurp(second.replicas) == replicas);
        CHECK(slurp(second.modes) == modes);
        CHECK(slurp(second.holes) == holes);

        CHECK(count_lines(replicas) == results.size() + 1);
        std::size_t modes_total = 0;
        for (const auto& r : results) modes_total += r.mode_reports.size();
        CHECK(count_lines(modes) == modes_total + 1);

        std::istringstream lines(holes);
        std::string line;
        while (std::getline(lines, line)) {
            const auto j = nlohmann::json::parse(line);
            CHECK(j.size() == 5);
            for (const char* key : {"block", "j", "H", "T", "outcome"}) CHECK(j.contains(key));
            CHECK(j["T"].get<int>() >= 1);
        }
        std::filesystem::remove_all(dir);
    }
    SUBCASE("unwritable path names the path") {
        const auto dir = scratch_dir("blocked");
        std::filesystem::create_directories(dir);
        std::ofstream(dir / "file") << "x";
        try {
            export_results({}, dir / "file" / "sub");
            FAIL("expected ExportError");
        } catch (const ExportError& e) {
            CHECK(std::string(e.what()).find("file") != std::string::npos);
        }
        std::filesystem::remove_all(dir);
    }
    SUBCASE("number formatting round-trips") {
        CHECK(format_double(0.5) == "0.5");
        CHECK(format_double(0.97) == "0.97");
        CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
    }
}

TEST_CASE("spec files") {
    SUBCASE("valid file") {
        const ExperimentSpec spec = parse_experiment_spec(
            "# grid\n"
            "n = 4, 8\n"
            "a = 4\n"
            "lambda = 0.5\n"
            "zeta = 0.9, 0.97   # two densities\n"
            "seed = 12\n"
            "replicas = 7\n"
            "max-modes = 50\n"
            "budget = 1000\n"
            "out = results\n"
            "holes = true\n");
        CHECK(spec.cells.size() == 4);
        CHECK(spec.cells[1] == GridCell{4, 4, 0.5, 0.97});
        CHECK(spec.master_seed == 12);
        CHECK(spec.replicas == 7);
        CHECK(spec.max_modes == 50);
        CHECK(spec.budget == 1000);
        CHECK(spec.output == "results");
        CHECK(spec.record_holes);
    }
    auto line_of = [](const std::string& text) {
        try {
            parse_experiment_spec(text);
        } catch (const SpecFileError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("") == 1);
    CHECK(line_of("# only a comment\n") == 1);
    CHECK(line_of("n = 4\nthis line is wrong\n") == 2);
    CHECK(line_of("n = 4\na = 4\nlambda = 0.5\nzeta = x\nseed = 1\n") == 4);
    CHECK(line_of("n = 4\na = 4\nlambda = 0.5\nzeta = 0.9\nseed = 1\ncolour = red\n") == 6);
    CHECK(line_of("n = 4\nn = 6\n") == 2);
    CHECK(line_of("n = 4\na = 4\nlambda = 0.5\nzeta = 0.9\n") == 4);  // missing seed
    CHECK(line_of("n = 3\na = 4\nlambda = 0.5\nzeta = 0.9\nseed = 1\n") == 1);
    CHECK(line_of("n = 4\na = 4\nlambda = 0.5\nzeta = 0.9\nseed = 1\nholes = maybe\n") == 6);
    CHECK_THROWS_AS(load_experiment_spec("/nonexistent/spec.txt"), ParameterError);
}
