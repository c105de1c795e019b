#include "morphkit/pipeline/manifest.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "morphkit/common/error.hpp"
#include "morphkit/common/sha256.hpp"

namespace morphkit::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

RunManifest RunManifest::load_or_create(const std::string& run_dir,
                                        const std::string& config_hash) {
    RunManifest m;
    m.config_hash = config_hash;
    m.run_id = config_hash.substr(0, 12);
    const std::string path = run_dir + "/manifest.json";
    if (fs::exists(path)) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        const json j = json::parse(ss.str());
        m.run_id = j.value("run_id", m.run_id);
        m.tool_version = j.value("tool_version", std::string(kToolVersion));
        if (j.contains("input_digests"))
            m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
        if (j.contains("artifact_digests"))
            m.artifact_digests = j.at("artifact_digests").get<std::map<std::string, std::string>>();
        if (j.contains("timings_sec"))
            m.timings_sec = j.at("timings_sec").get<std::map<std::string, double>>();
        m.config_hash = config_hash;  // always reflects the current config
    }
    return m;
}

void RunManifest::save(const std::string& run_dir) const {
    json j;
    j["run_id"] = run_id;
    j["tool_version"] = tool_version;
    j["config_hash"] = config_hash;
    j["input_digests"] = input_digests;
    j["artifact_digests"] = artifact_digests;
    j["timings_sec"] = timings_sec;
    std::ofstream out(run_dir + "/manifest.json");
    if (!out) throw IoError("manifest: cannot write " + run_dir + "/manifest.json");
    out << j.dump(2) << "\n";
}

void RunManifest::record_input(const std::string& path) {
    input_digests[path] = Sha256::of_file(path);
}

void RunManifest::record_artifact(const std::string& path) {
    artifact_digests[path] = Sha256::of_file(path);
}

ManifestLock::ManifestLock(const std::string& run_dir) {
    fs::create_directories(run_dir);
    lock_path_ = run_dir + "/.morphkit.lock";
    const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0)
        throw IoError("run directory is locked by another command (" + lock_path_ +
                      " exists; remove it if the owner crashed)");
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] const auto n = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

ManifestLock::~ManifestLock() {
    ::unlink(lock_path_.c_str());
}

}  // namespace morphkit::pipeline
