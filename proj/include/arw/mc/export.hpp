#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "arw/mc/experiment.hpp"

namespace arw::mc {

class ExportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kReplicaCsvHeader =
    "n,a,K,N,lambda,zeta,seed,modes,J_total,terminated_by,free_final,frozen_final,defects_final";
inline constexpr const char* kModeCsvHeader =
    "n,a,lambda,zeta,seed,mode,J_delta,emissions,condition1,free,frozen,defects,F_En,F_total";
inline constexpr const char* kFlowCsvHeader = "n,a,lambda,zeta,seed,mode,label,block,L,R,D,M,S";

/// Shortest round-trip decimal form.
std::string format_double(double x);

std::string replica_csv(const std::vector<ReplicaResult>& results);
std::string mode_csv(const std::vector<ReplicaResult>& results);
/// Per-block counters of every mode, one row per (mode, label).
std::string flow_csv(const std::vector<ReplicaResult>& results);
/// One JSON object per attempted emission: block, j, H, T, outcome.
std::string hole_jsonl(const std::vector<carpet::HoleRecord>& records);

/// Writes `contents` to `path`, replacing it. Throws ExportError naming the path.
void write_text(const std::filesystem::path& path, const std::string& contents);

struct ExportedFiles {
    std::filesystem::path replicas;
    std::filesystem::path modes;
    std::filesystem::path flows;
    std::filesystem::path holes;  ///< empty unless hole records were present
};

/// replicas.csv, modes.csv and flows.csv under `directory` (created if
/// missing), plus holes.jsonl when any replica recorded its holes.
ExportedFiles export_results(const std::vector<ReplicaResult>& results, const std::filesystem::path& directory);

}  // namespace arw::mc
