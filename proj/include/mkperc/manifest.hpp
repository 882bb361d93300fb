#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mkperc/config.hpp"

namespace mkperc {

inline constexpr const char* kVersion = "1.0.0";

struct ManifestEntry {
    std::string path;  // relative to the run directory
    std::uint64_t bytes = 0;
    std::string fnv1a64;
};

struct RunManifest {
    SimConfig config;
    std::string version = kVersion;
    std::uint64_t master_seed = 0;
    std::string started_at;
    std::string finished_at;
    std::vector<ManifestEntry> files;
};

std::string iso8601_utc_now();

// FNV-1a 64 over the file's bytes, rendered as 16 hex digits.
std::string hash_file(const std::string& path);

// Hashes `relative_files` under `dir`, fills the inventory, and writes
// dir/manifest.json atomically (temp file + rename).
void write_manifest(RunManifest manifest, const std::string& dir,
                    const std::vector<std::string>& relative_files);

}  // namespace mkperc
