#pragma once

#include <map>
#include <string>

namespace morphkit::pipeline {

inline constexpr const char* kToolVersion = "morphkit 0.1.0";

/// Reproducibility record for a run directory. Each command merges its
/// section; identical config + inputs reproduce identical artifact digests.
struct RunManifest {
    std::string run_id;
    std::string tool_version = kToolVersion;
    std::string config_hash;
    std::map<std::string, std::string> input_digests;     // path -> sha256
    std::map<std::string, std::string> artifact_digests;  // path -> sha256
    std::map<std::string, double> timings_sec;            // command -> wall time

    static RunManifest load_or_create(const std::string& run_dir, const std::string& config_hash);
    void save(const std::string& run_dir) const;

    void record_input(const std::string& path);
    void record_artifact(const std::string& path);
};

/// Advisory lock on a run directory (O_EXCL lock file holding the PID);
/// released on destruction.
class ManifestLock {
public:
    explicit ManifestLock(const std::string& run_dir);
    ~ManifestLock();
    ManifestLock(const ManifestLock&) = delete;
    ManifestLock& operator=(const ManifestLock&) = delete;

private:
    std::string lock_path_;
};

}  // namespace morphkit::pipeline
