#include "arw/mc/export.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

#include "json.hpp"

namespace arw::mc {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string cell_prefix(const GridCell& c) {
    return std::to_string(c.n) + ',' + std::to_string(c.a) + ',' + format_double(c.sleep_rate) + ',' +
           format_double(c.zeta);
}

}  // namespace

std::string replica_csv(const std::vector<ReplicaResult>& results) {
    std::string out = std::string(kReplicaCsvHeader) + '\n';
    for (const ReplicaResult& r : results) {
        const GridCell& c = r.cell;
        out += std::to_string(c.n) + ',' + std::to_string(c.a) + ',' + std::to_string(c.block_size()) + ',' +
               std::to_string(c.ring_size()) + ',' + format_double(c.sleep_rate) + ',' + format_double(c.zeta) + ',' +
               std::to_string(r.seed) + ',' + std::to_string(r.modes) + ',' + std::to_string(r.total_jumps) + ',' +
               std::string(to_string(r.terminated_by)) + ',' + std::to_string(r.free_final) + ',' +
               std::to_string(r.frozen_final) + ',' + std::to_string(r.defects_final) + '\n';
    }
    return out;
}

std::string mode_csv(const std::vector<ReplicaResult>& results) {
    std::string out = std::string(kModeCsvHeader) + '\n';
    for (const ReplicaResult& r : results) {
        for (const carpet::ModeReport& m : r.mode_reports) {
            out += cell_prefix(r.cell) + ',' + std::to_string(r.seed) + ',' + std::to_string(m.mode) + ',' +
                   std::to_string(m.jumps) + ',' + std::to_string(m.emissions) + ',' + (m.condition1 ? "1" : "0") +
                   ',' + std::to_string(m.free) + ',' + std::to_string(m.frozen) + ',' + std::to_string(m.defects) +
                   ',' + std::to_string(m.frozen_in_emitters) + ',' + std::to_string(m.frozen_total) + '\n';
        }
    }
    return out;
}

std::string flow_csv(const std::vector<ReplicaResult>& results) {
    std::string out = std::string(kFlowCsvHeader) + '\n';
    for (const ReplicaResult& r : results) {
        const std::int64_t blocks = r.cell.n + 2;
        for (const carpet::ModeReport& m : r.mode_reports) {
            // Labels rotate by n/2 + 1 per mode.
            const std::int64_t rotation = (m.mode * (r.cell.n / 2 + 1)) % blocks;
            for (std::size_t label = 0; label < m.flows.size(); ++label) {
                const carpet::BlockFlow& f = m.flows[label];
                const std::int64_t block = (static_cast<std::int64_t>(label) + rotation) % blocks;
                out += cell_prefix(r.cell) + ',' + std::to_string(r.seed) + ',' + std::to_string(m.mode) + ',' +
                       std::to_string(label) + ',' + std::to_string(block) + ',' + std::to_string(f.emitted_left) +
                       ',' + std::to_string(f.emitted_right) + ',' + std::to_string(f.arrived_vacant) + ',' +
                       std::to_string(f.arrived_parked) + ',' + std::to_string(f.frozen) + '\n';
            }
        }
    }
    return out;
}

std::string hole_jsonl(const std::vector<carpet::HoleRecord>& records) {
    std::string out;
    for (const carpet::HoleRecord& h : records) {
        nlohmann::ordered_json j;
        j["block"] = h.block;
        j["j"] = h.attempt;
        j["H"] = h.hole_after;
        j["T"] = h.steps;
        j["outcome"] = std::string(carpet::to_string(h.outcome));
        out += j.dump() + '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ExportError("cannot open " + path.string() + " for writing");
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    file.close();
    if (!file) throw ExportError("write to " + path.string() + " failed");
}

ExportedFiles export_results(const std::vector<ReplicaResult>& results, const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw ExportError("cannot create " + directory.string() + ": " + ec.message());

    ExportedFiles files{directory / "replicas.csv", directory / "modes.csv", directory / "flows.csv", {}};
    write_text(files.replicas, replica_csv(results));
    write_text(files.modes, mode_csv(results));
    write_text(files.flows, flow_csv(results));

    std::vector<carpet::HoleRecord> holes;
    for (const ReplicaResult& r : results) holes.insert(holes.end(), r.holes.begin(), r.holes.end());
    if (!holes.empty()) {
        files.holes = directory / "holes.jsonl";
        write_text(files.holes, hole_jsonl(holes));
    }
    return files;
}

}  // namespace arw::mc
