#include "mkperc/manifest.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "mkperc/hash.hpp"

namespace mkperc {

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hash_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for hashing: " + path);
    Fnv1a64 h;
    char buf[1 << 16];
    while (f.read(buf, sizeof buf) || f.gcount() > 0)
        h.update(buf, static_cast<std::size_t>(f.gcount()));
    return h.hex();
}

void write_manifest(RunManifest manifest, const std::string& dir,
                    const std::vector<std::string>& relative_files) {
    namespace fs = std::filesystem;
    manifest.files.clear();
    for (const std::string& rel : relative_files) {
        const fs::path full = fs::path(dir) / rel;
        ManifestEntry entry;
        entry.path = rel;
        entry.bytes = static_cast<std::uint64_t>(fs::file_size(full));
        entry.fnv1a64 = hash_file(full.string());
        manifest.files.push_back(std::move(entry));
    }

    nlohmann::json j;
    j["version"] = manifest.version;
    j["master_seed"] = manifest.master_seed;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["config"] = nlohmann::json::parse(config_to_json(manifest.config));
    j["files"] = nlohmann::json::array();
    for (const ManifestEntry& e : manifest.files)
        j["files"].push_back(
            {{"path", e.path}, {"bytes", e.bytes}, {"fnv1a64", e.fnv1a64}});

    const fs::path final_path = fs::path(dir) / "manifest.json";
    const fs::path tmp_path = fs::path(dir) / "manifest.json.tmp";
    {
        std::ofstream f(tmp_path, std::ios::binary);
        if (!f) throw IoError("cannot open for writing: " + tmp_path.string());
        f << j.dump(2) << '\n';
        if (!f) throw IoError("write failed: " + tmp_path.string());
    }
    std::error_code ec;
    fs::rename(tmp_path, final_path, ec);
    if (ec)
        throw IoError("cannot move manifest into place: " + ec.message());
}

}  // namespace mkperc
