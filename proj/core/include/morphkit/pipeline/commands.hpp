#pragma once

#include <string>
#include <vector>

#include "morphkit/pipeline/config.hpp"
#include "morphkit/pipeline/protocol.hpp"

namespace morphkit::pipeline {

/// Run-directory layout shared by all commands.
struct RunPaths {
    std::string root;
    explicit RunPaths(const std::string& run_dir) : root(run_dir) {}

    std::string aligned_dir() const { return root + "/aligned"; }
    std::string supervisors_dir() const { return root + "/supervisors"; }
    std::string baseline_dir() const { return root + "/baseline"; }
    std::string checkpoints_dir() const { return root + "/checkpoints"; }
    std::string logs_dir() const { return root + "/logs"; }
    std::string morphs_dir() const { return root + "/morphs"; }
    std::string reports_dir() const { return root + "/reports"; }

    std::string aligned_image(const std::string& subject) const {
        return aligned_dir() + "/" + subject + ".png";
    }
    std::string aligned_landmarks(const std::string& subject) const {
        return aligned_dir() + "/" + subject + ".lmk";
    }
    std::string landmark_checkpoint() const { return checkpoints_dir() + "/landmark_blender.lmb"; }
    std::string image_checkpoint() const { return checkpoints_dir() + "/image_blender.gib"; }
    std::string landmark_log() const { return logs_dir() + "/landmark_training.csv"; }
    std::string image_log() const { return logs_dir() + "/image_training.csv"; }
    std::string morph_image(const std::string& a, const std::string& b) const {
        return morphs_dir() + "/" + a + "_" + b + "_morph.png";
    }
    std::string baseline_morph(const std::string& a, const std::string& b) const {
        return morphs_dir() + "/" + a + "_" + b + "_baseline.png";
    }
};

/// Aligned inputs for one protocol pair.
struct AlignedPair {
    ProtocolPair protocol;
    std::string subject_a, subject_b;
    geom::FaceImage img_a, img_b;
    geom::LandmarkSet lmk_a, lmk_b;
};

/// Loads the aligned crops + landmarks for every protocol pair from the run
/// directory (requires a prior `prepare`).
std::vector<AlignedPair> load_aligned_pairs(const RunConfig& cfg);

void cmd_synth(const RunConfig& cfg);
void cmd_prepare(const RunConfig& cfg);
void cmd_train_landmarks(const RunConfig& cfg, bool resume = false);
void cmd_train_blender(const RunConfig& cfg, bool resume = false);
void cmd_generate(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg, const std::string& detector_scores_csv = "");

}  // namespace morphkit::pipeline
