#pragma once

#include <string>

#include "morphkit/geometry/align.hpp"
#include "morphkit/gib/trainer.hpp"
#include "morphkit/lmb/trainer.hpp"

namespace morphkit::pipeline {

struct MatcherConfig {
    std::string type = "toy";  // toy | external
    std::uint64_t seed = 7;
    std::string command;  // external plugin command line (takes an image path)
};

struct SynthConfig {
    int count = 16;
    int resolution = 64;
};

/// Whole-run configuration. Loaded from JSON with unknown keys rejected at
/// every nesting level; loading then re-serializing is idempotent.
/// Sub-module seeds are derived from the top-level seed.
struct RunConfig {
    std::uint64_t seed = 1;
    std::string run_dir = "run";
    std::string data_dir = "data";
    std::string protocol_csv;  // empty -> <data_dir>/pairs.csv
    double far_target = 0.001;
    double alpha = 0.5;
    int workers = 1;

    geom::AlignmentConfig alignment;
    lmb::BlenderNetConfig landmark_blender;
    gib::BlendGeneratorConfig image_blender;
    MatcherConfig matcher;
    SynthConfig synth;

    RunConfig();

    /// Re-derives dependent fields (sub-seeds, alpha, landmark counts) after
    /// seed/alpha edits; called by the loader and the CLI flag overrides.
    void propagate();
    void validate() const;

    std::string protocol_path() const {
        return protocol_csv.empty() ? data_dir + "/pairs.csv" : protocol_csv;
    }
};

RunConfig run_config_from_json(const std::string& json_text);
std::string run_config_to_json(const RunConfig& cfg);

RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& cfg, const std::string& path);

/// SHA-256 of the canonical serialized config.
std::string config_hash(const RunConfig& cfg);

}  // namespace morphkit::pipeline
