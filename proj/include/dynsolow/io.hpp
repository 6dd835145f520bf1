#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynsolow/integrator.hpp"

namespace dynsolow {

// Header `t,y,k_s,k_d,k,s,h,xi,regime` (full) or `t,s,h,z` (reduced); every
// float printed with 17 significant digits so values round-trip exactly.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
std::string trajectory_csv(const Trajectory& traj);

// Reads either trajectory layout back; manifest fields are left to the
// caller (load the companion manifest with load_config).
Trajectory read_trajectory_csv(std::istream& in);
Trajectory read_trajectory_csv_file(const std::filesystem::path& path);

struct ManifestInfo {
    std::vector<std::string> overrides;     // config keys overridden by the user
    double wall_clock_seconds = 0.0;
    std::vector<std::string> output_files;  // files the run produced
};

// Config echo of the run plus commented metadata; load_config() accepts the
// result unchanged, which is what makes a rerun bit-reproducible.
std::string manifest_text(const TrajectoryManifest& manifest, const ManifestInfo& info);

// Write-to-temp-then-rename, so readers never observe partial files.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dynsolow
