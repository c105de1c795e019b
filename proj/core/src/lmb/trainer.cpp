#include "morphkit/lmb/trainer.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "morphkit/common/error.hpp"
#include "morphkit/nn/serialize.hpp"

namespace morphkit::lmb {

using namespace nn;
using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'L', 'M', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

Var mean_of(const std::vector<Var>& terms) {
    Var acc = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) acc = add(acc, terms[i]);
    return scale(acc, 1.0 / static_cast<double>(terms.size()));
}

}  // namespace

std::string blender_config_to_json(const BlenderNetConfig& cfg) {
    json j;
    j["landmark_count"] = cfg.landmark_count;
    j["encoder_hidden"] = cfg.encoder_hidden;
    j["code_dim"] = cfg.code_dim;
    j["disc_hidden"] = cfg.disc_hidden;
    j["learning_rate"] = cfg.learning_rate;
    j["disc_learning_rate"] = cfg.disc_learning_rate;
    j["lambda_gd"] = cfg.weights.lambda_gd;
    j["lambda_gb"] = cfg.weights.lambda_gb;
    j["lambda_adv"] = cfg.weights.lambda_adv;
    j["batch_size"] = cfg.batch_size;
    j["steps"] = cfg.steps;
    j["seed"] = cfg.seed;
    j["zero_init_shift_head"] = cfg.zero_init_shift_head;
    j["shift_init_scale"] = cfg.shift_init_scale;
    return j.dump();
}

BlenderNetConfig blender_config_from_json(const std::string& text) {
    const json j = json::parse(text);
    BlenderNetConfig cfg;
    cfg.landmark_count = j.at("landmark_count").get<int>();
    cfg.encoder_hidden = j.at("encoder_hidden").get<std::vector<int>>();
    cfg.code_dim = j.at("code_dim").get<int>();
    cfg.disc_hidden = j.at("disc_hidden").get<std::vector<int>>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.disc_learning_rate = j.at("disc_learning_rate").get<double>();
    cfg.weights.lambda_gd = j.at("lambda_gd").get<double>();
    cfg.weights.lambda_gb = j.at("lambda_gb").get<double>();
    cfg.weights.lambda_adv = j.at("lambda_adv").get<double>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.steps = j.at("steps").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.zero_init_shift_head = j.at("zero_init_shift_head").get<bool>();
    cfg.shift_init_scale = j.at("shift_init_scale").get<double>();
    return cfg;
}

LandmarkBlenderTrainer::LandmarkBlenderTrainer(const BlenderNetConfig& cfg)
    : cfg_(cfg), blender_(cfg), disc_(cfg),
      opt_g_(blender_.params(), cfg.learning_rate),
      opt_d_(disc_.params(), cfg.disc_learning_rate) {}

void LandmarkBlenderTrainer::save_checkpoint(std::ostream& out) const {
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_string(out, blender_config_to_json(cfg_));
    write_u64(out, static_cast<std::uint64_t>(step_counter_));
    write_params(out, blender_.params());
    write_params(out, disc_.params());
    opt_g_.save(out);
    opt_d_.save(out);
}

void LandmarkBlenderTrainer::save_checkpoint(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_checkpoint: cannot write " + path);
    save_checkpoint(out);
}

void LandmarkBlenderTrainer::load_state(std::istream& in) {
    step_counter_ = static_cast<std::int64_t>(read_u64(in));
    read_params(in, blender_.params());
    read_params(in, disc_.params());
    opt_g_.load(in);
    opt_d_.load(in);
}

std::unique_ptr<LandmarkBlenderTrainer> LandmarkBlenderTrainer::from_checkpoint(
    const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("from_checkpoint: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("from_checkpoint: bad magic in " + path + " (expected LMB1)");
    const std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw IoError("from_checkpoint: unsupported version " + std::to_string(version));
    const BlenderNetConfig cfg = blender_config_from_json(read_string(in));
    auto trainer = std::make_unique<LandmarkBlenderTrainer>(cfg);
    trainer->load_state(in);
    return trainer;
}

std::vector<LandmarkTrainLogRow> LandmarkBlenderTrainer::train(
    const std::vector<LandmarkPair>& pairs, const std::vector<geom::LandmarkSet>& real_pool,
    int steps) {
    if (pairs.empty()) throw DimensionError("train: empty pair dataset");
    if (real_pool.empty()) throw DimensionError("train: empty real-landmark pool");
    for (const auto& p : pairs)
        if (p.l1.count() != cfg_.landmark_count || p.l2.count() != cfg_.landmark_count)
            throw DimensionError("train: pair " + p.id + " landmark count mismatch");
    for (const auto& l : real_pool)
        if (l.count() != cfg_.landmark_count)
            throw DimensionError("train: real pool landmark count mismatch");

    const int batch = std::min<int>(cfg_.batch_size, static_cast<int>(pairs.size()));
    std::vector<LandmarkTrainLogRow> log;
    log.reserve(static_cast<std::size_t>(steps));

    // periodic snapshots bound the state lost on a divergence abort
    constexpr int kSnapshotEvery = 25;
    std::string snapshot_bytes;
    for (int s = 0; s < steps; ++s) {
        if (s % kSnapshotEvery == 0) {
            std::ostringstream snapshot;
            save_checkpoint(snapshot);
            snapshot_bytes = snapshot.str();
        }

        std::vector<std::size_t> batch_idx(static_cast<std::size_t>(batch));
        for (int b = 0; b < batch; ++b)
            batch_idx[static_cast<std::size_t>(b)] =
                (static_cast<std::size_t>(step_counter_) * batch + b) % pairs.size();

        // ---- discriminator step (fakes detached) ----
        std::vector<Var> d_terms;
        d_terms.reserve(static_cast<std::size_t>(batch));
        for (int b = 0; b < batch; ++b) {
            const LandmarkPair& pair = pairs[batch_idx[static_cast<std::size_t>(b)]];
            const geom::LandmarkSet lm = blender_.blend(pair.l1, pair.l2);
            const geom::LandmarkSet& real =
                real_pool[(static_cast<std::size_t>(step_counter_) * batch + b) % real_pool.size()];
            const Var d_real = disc_.forward(flatten_landmarks(real));
            const Var d_fake = disc_.forward(flatten_landmarks(lm));
            const Var one = constant(Tensor::scalar(1.0));
            d_terms.push_back(
                scale(add(log_act(d_real), log_act(sub(one, d_fake))), -1.0));
        }
        const Var d_loss = mean_of(d_terms);
        backward(d_loss);
        opt_d_.step();

        // ---- generator step ----
        std::vector<Var> g_terms, gd_terms, gb_terms, adv_terms;
        for (int b = 0; b < batch; ++b) {
            const LandmarkPair& pair = pairs[batch_idx[static_cast<std::size_t>(b)]];
            const Var l1 = flatten_landmarks(pair.l1);
            const Var l2 = flatten_landmarks(pair.l2);
            const auto [s1, s2] = blender_.forward(l1, l2);
            const Var lm = scale(add(add(l1, s1), add(l2, s2)), 0.5);
            const Var gd = geometric_distance_loss_graph(lm, l1, l2);
            const Var gb = geometric_balance_loss_graph(lm, l1, l2);
            const Var adv = scale(log_act(disc_.forward(lm)), -1.0);
            Var total = scale(gd, cfg_.weights.lambda_gd);
            total = add(total, scale(gb, cfg_.weights.lambda_gb));
            total = add(total, scale(adv, cfg_.weights.lambda_adv));
            g_terms.push_back(total);
            gd_terms.push_back(gd);
            gb_terms.push_back(gb);
            adv_terms.push_back(adv);
        }
        const Var g_loss = mean_of(g_terms);
        backward(g_loss);
        opt_g_.step();

        ++step_counter_;
        LandmarkTrainLogRow row;
        row.step = step_counter_;
        row.l_gd = scalar_of(mean_of(gd_terms));
        row.l_gb = scalar_of(mean_of(gb_terms));
        row.l_adv = scalar_of(mean_of(adv_terms));
        row.total = scalar_of(g_loss);
        row.d_loss = scalar_of(d_loss);
        log.push_back(row);

        if (!std::isfinite(row.total) || !std::isfinite(row.d_loss)) {
            std::istringstream restore(snapshot_bytes);
            char magic[4];
            restore.read(magic, 4);
            read_u32(restore);
            read_string(restore);
            load_state(restore);
            throw DivergenceError("landmark blender diverged at step " +
                                  std::to_string(row.step) +
                                  "; parameters restored to the last snapshot");
        }
    }
    return log;
}

std::pair<std::unique_ptr<LandmarkBlenderTrainer>, std::vector<LandmarkTrainLogRow>>
train_landmark_blender(const std::vector<LandmarkPair>& pairs,
                       const std::vector<geom::LandmarkSet>& real_pool,
                       const BlenderNetConfig& cfg) {
    auto trainer = std::make_unique<LandmarkBlenderTrainer>(cfg);
    auto log = trainer->train(pairs, real_pool, cfg.steps);
    return {std::move(trainer), std::move(log)};
}

}  // namespace morphkit::lmb
