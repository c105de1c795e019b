#include "morphkit/pipeline/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "morphkit/common/error.hpp"
#include "morphkit/common/sha256.hpp"

namespace morphkit::pipeline {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key))
            throw ConfigError("config: unknown key \"" + key + "\" in " + where);
    }
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig::RunConfig() {
    // desk-scale defaults: 64 px crops, 106-point template of the synthetic
    // dataset (pupils 101/102, mid-lip points 104/105 as alignment anchors)
    alignment.output_size = 64;
    alignment.left_eye_indices = {101};
    alignment.right_eye_indices = {102};
    alignment.mouth_indices = {104, 105};
    propagate();
}

void RunConfig::propagate() {
    landmark_blender.seed = seed ^ 0xA11CEull;
    image_blender.seed = seed ^ 0xB0B5ull;
    image_blender.alpha = alpha;
    image_blender.resolution = alignment.output_size;
    image_blender.landmark_count = landmark_blender.landmark_count;
    image_blender.graph_nodes = landmark_blender.landmark_count;
}

void RunConfig::validate() const {
    if (far_target <= 0.0 || far_target >= 1.0)
        throw ConfigError("config: far_target must be in (0,1)");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("config: alpha must be in [0,1]");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
    if (matcher.type != "toy" && matcher.type != "external")
        throw ConfigError("config: matcher.type must be toy or external");
    if (matcher.type == "external" && matcher.command.empty())
        throw ConfigError("config: external matcher requires matcher.command");
    if (synth.count < 2 || synth.count % 2 != 0)
        throw ConfigError("config: synth.count must be an even number >= 2");
    for (int idx : alignment.left_eye_indices)
        if (idx >= landmark_blender.landmark_count)
            throw ConfigError("config: alignment anchor index out of range");
    image_blender.validate();
}

RunConfig run_config_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: invalid JSON: ") + e.what());
    }

    reject_unknown_keys(j, {"seed", "run_dir", "data_dir", "protocol_csv", "far_target", "alpha",
                            "workers", "alignment", "landmark_blender", "image_blender", "matcher",
                            "synth"},
                        "top level");

    RunConfig cfg;
    maybe(j, "seed", cfg.seed);
    maybe(j, "run_dir", cfg.run_dir);
    maybe(j, "data_dir", cfg.data_dir);
    maybe(j, "protocol_csv", cfg.protocol_csv);
    maybe(j, "far_target", cfg.far_target);
    maybe(j, "alpha", cfg.alpha);
    maybe(j, "workers", cfg.workers);

    if (j.contains("alignment")) {
        const json& a = j.at("alignment");
        reject_unknown_keys(a, {"output_size", "left_eye", "right_eye", "mouth", "padding"},
                            "alignment");
        maybe(a, "output_size", cfg.alignment.output_size);
        maybe(a, "left_eye", cfg.alignment.left_eye_indices);
        maybe(a, "right_eye", cfg.alignment.right_eye_indices);
        maybe(a, "mouth", cfg.alignment.mouth_indices);
        if (a.contains("padding")) {
            const std::string p = a.at("padding").get<std::string>();
            if (p == "edge")
                cfg.alignment.padding = geom::AlignmentConfig::Padding::Edge;
            else if (p == "zero")
                cfg.alignment.padding = geom::AlignmentConfig::Padding::Zero;
            else
                throw ConfigError("config: alignment.padding must be edge or zero");
        }
    }

    if (j.contains("landmark_blender")) {
        const json& b = j.at("landmark_blender");
        reject_unknown_keys(b,
                            {"landmark_count", "encoder_hidden", "code_dim", "disc_hidden",
                             "learning_rate", "disc_learning_rate", "lambda_gd", "lambda_gb",
                             "lambda_adv", "batch_size", "steps", "zero_init_shift_head",
                             "shift_init_scale"},
                            "landmark_blender");
        maybe(b, "landmark_count", cfg.landmark_blender.landmark_count);
        maybe(b, "encoder_hidden", cfg.landmark_blender.encoder_hidden);
        maybe(b, "code_dim", cfg.landmark_blender.code_dim);
        maybe(b, "disc_hidden", cfg.landmark_blender.disc_hidden);
        maybe(b, "learning_rate", cfg.landmark_blender.learning_rate);
        maybe(b, "disc_learning_rate", cfg.landmark_blender.disc_learning_rate);
        maybe(b, "lambda_gd", cfg.landmark_blender.weights.lambda_gd);
        maybe(b, "lambda_gb", cfg.landmark_blender.weights.lambda_gb);
        maybe(b, "lambda_adv", cfg.landmark_blender.weights.lambda_adv);
        maybe(b, "batch_size", cfg.landmark_blender.batch_size);
        maybe(b, "steps", cfg.landmark_blender.steps);
        maybe(b, "zero_init_shift_head", cfg.landmark_blender.zero_init_shift_head);
        maybe(b, "shift_init_scale", cfg.landmark_blender.shift_init_scale);
    }

    if (j.contains("image_blender")) {
        const json& g = j.at("image_blender");
        reject_unknown_keys(g,
                            {"iterations", "heatmap_sigma", "appearance_channels",
                             "shape_channels", "gcn_hidden", "disc_channels", "lambda_perceptual",
                             "lambda_l1", "lambda_msssim", "lambda_adv", "generator_lr",
                             "discriminator_lr", "discriminator_mode", "steps"},
                            "image_blender");
        maybe(g, "iterations", cfg.image_blender.iterations);
        maybe(g, "heatmap_sigma", cfg.image_blender.heatmap_sigma);
        maybe(g, "appearance_channels", cfg.image_blender.appearance_channels);
        maybe(g, "shape_channels", cfg.image_blender.shape_channels);
        maybe(g, "gcn_hidden", cfg.image_blender.gcn_hidden);
        maybe(g, "disc_channels", cfg.image_blender.disc_channels);
        maybe(g, "lambda_perceptual", cfg.image_blender.lambda_perceptual);
        maybe(g, "lambda_l1", cfg.image_blender.lambda_l1);
        maybe(g, "lambda_msssim", cfg.image_blender.lambda_msssim);
        maybe(g, "lambda_adv", cfg.image_blender.lambda_adv);
        maybe(g, "generator_lr", cfg.image_blender.generator_lr);
        maybe(g, "discriminator_lr", cfg.image_blender.discriminator_lr);
        if (g.contains("discriminator_mode"))
            cfg.image_blender.mode =
                gib::discriminator_mode_from_string(g.at("discriminator_mode").get<std::string>());
        maybe(g, "steps", cfg.image_blender.steps);
    }

    if (j.contains("matcher")) {
        const json& m = j.at("matcher");
        reject_unknown_keys(m, {"type", "seed", "command"}, "matcher");
        maybe(m, "type", cfg.matcher.type);
        maybe(m, "seed", cfg.matcher.seed);
        maybe(m, "command", cfg.matcher.command);
    }

    if (j.contains("synth")) {
        const json& s = j.at("synth");
        reject_unknown_keys(s, {"count", "resolution"}, "synth");
        maybe(s, "count", cfg.synth.count);
        maybe(s, "resolution", cfg.synth.resolution);
    }

    cfg.propagate();
    cfg.validate();
    return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["run_dir"] = cfg.run_dir;
    j["data_dir"] = cfg.data_dir;
    j["protocol_csv"] = cfg.protocol_csv;
    j["far_target"] = cfg.far_target;
    j["alpha"] = cfg.alpha;
    j["workers"] = cfg.workers;

    j["alignment"]["output_size"] = cfg.alignment.output_size;
    j["alignment"]["left_eye"] = cfg.alignment.left_eye_indices;
    j["alignment"]["right_eye"] = cfg.alignment.right_eye_indices;
    j["alignment"]["mouth"] = cfg.alignment.mouth_indices;
    j["alignment"]["padding"] =
        cfg.alignment.padding == geom::AlignmentConfig::Padding::Edge ? "edge" : "zero";

    j["landmark_blender"]["landmark_count"] = cfg.landmark_blender.landmark_count;
    j["landmark_blender"]["encoder_hidden"] = cfg.landmark_blender.encoder_hidden;
    j["landmark_blender"]["code_dim"] = cfg.landmark_blender.code_dim;
    j["landmark_blender"]["disc_hidden"] = cfg.landmark_blender.disc_hidden;
    j["landmark_blender"]["learning_rate"] = cfg.landmark_blender.learning_rate;
    j["landmark_blender"]["disc_learning_rate"] = cfg.landmark_blender.disc_learning_rate;
    j["landmark_blender"]["lambda_gd"] = cfg.landmark_blender.weights.lambda_gd;
    j["landmark_blender"]["lambda_gb"] = cfg.landmark_blender.weights.lambda_gb;
    j["landmark_blender"]["lambda_adv"] = cfg.landmark_blender.weights.lambda_adv;
    j["landmark_blender"]["batch_size"] = cfg.landmark_blender.batch_size;
    j["landmark_blender"]["steps"] = cfg.landmark_blender.steps;
    j["landmark_blender"]["zero_init_shift_head"] = cfg.landmark_blender.zero_init_shift_head;
    j["landmark_blender"]["shift_init_scale"] = cfg.landmark_blender.shift_init_scale;

    j["image_blender"]["iterations"] = cfg.image_blender.iterations;
    j["image_blender"]["heatmap_sigma"] = cfg.image_blender.heatmap_sigma;
    j["image_blender"]["appearance_channels"] = cfg.image_blender.appearance_channels;
    j["image_blender"]["shape_channels"] = cfg.image_blender.shape_channels;
    j["image_blender"]["gcn_hidden"] = cfg.image_blender.gcn_hidden;
    j["image_blender"]["disc_channels"] = cfg.image_blender.disc_channels;
    j["image_blender"]["lambda_perceptual"] = cfg.image_blender.lambda_perceptual;
    j["image_blender"]["lambda_l1"] = cfg.image_blender.lambda_l1;
    j["image_blender"]["lambda_msssim"] = cfg.image_blender.lambda_msssim;
    j["image_blender"]["lambda_adv"] = cfg.image_blender.lambda_adv;
    j["image_blender"]["generator_lr"] = cfg.image_blender.generator_lr;
    j["image_blender"]["discriminator_lr"] = cfg.image_blender.discriminator_lr;
    j["image_blender"]["discriminator_mode"] = gib::to_string(cfg.image_blender.mode);
    j["image_blender"]["steps"] = cfg.image_blender.steps;

    j["matcher"]["type"] = cfg.matcher.type;
    j["matcher"]["seed"] = cfg.matcher.seed;
    j["matcher"]["command"] = cfg.matcher.command;

    j["synth"]["count"] = cfg.synth.count;
    j["synth"]["resolution"] = cfg.synth.resolution;

    return j.dump(2);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return run_config_from_json(ss.str());
}

void save_run_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("config: cannot write " + path);
    out << run_config_to_json(cfg) << "\n";
}

std::string config_hash(const RunConfig& cfg) {
    return Sha256::of_string(run_config_to_json(cfg));
}

}  // namespace morphkit::pipeline
