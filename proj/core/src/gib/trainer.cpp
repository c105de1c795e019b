#include "morphkit/gib/trainer.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "morphkit/common/error.hpp"
#include "morphkit/gib/heatmap.hpp"
#include "morphkit/nn/serialize.hpp"

namespace morphkit::gib {

using namespace nn;
using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'G', 'I', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::string gib_config_to_json(const BlendGeneratorConfig& cfg) {
    json j;
    j["landmark_count"] = cfg.landmark_count;
    j["resolution"] = cfg.resolution;
    j["iterations"] = cfg.iterations;
    j["heatmap_sigma"] = cfg.heatmap_sigma;
    j["appearance_channels"] = cfg.appearance_channels;
    j["shape_channels"] = cfg.shape_channels;
    j["graph_nodes"] = cfg.graph_nodes;
    j["gcn_hidden"] = cfg.gcn_hidden;
    j["disc_channels"] = cfg.disc_channels;
    j["alpha"] = cfg.alpha;
    j["lambda_perceptual"] = cfg.lambda_perceptual;
    j["lambda_l1"] = cfg.lambda_l1;
    j["lambda_msssim"] = cfg.lambda_msssim;
    j["lambda_adv"] = cfg.lambda_adv;
    j["generator_lr"] = cfg.generator_lr;
    j["discriminator_lr"] = cfg.discriminator_lr;
    j["discriminator_mode"] = to_string(cfg.mode);
    j["seed"] = cfg.seed;
    j["steps"] = cfg.steps;
    return j.dump();
}

BlendGeneratorConfig gib_config_from_json(const std::string& text) {
    const json j = json::parse(text);
    BlendGeneratorConfig cfg;
    cfg.landmark_count = j.at("landmark_count").get<int>();
    cfg.resolution = j.at("resolution").get<int>();
    cfg.iterations = j.at("iterations").get<int>();
    cfg.heatmap_sigma = j.at("heatmap_sigma").get<double>();
    cfg.appearance_channels = j.at("appearance_channels").get<int>();
    cfg.shape_channels = j.at("shape_channels").get<int>();
    cfg.graph_nodes = j.at("graph_nodes").get<int>();
    cfg.gcn_hidden = j.at("gcn_hidden").get<int>();
    cfg.disc_channels = j.at("disc_channels").get<int>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.lambda_perceptual = j.at("lambda_perceptual").get<double>();
    cfg.lambda_l1 = j.at("lambda_l1").get<double>();
    cfg.lambda_msssim = j.at("lambda_msssim").get<double>();
    cfg.lambda_adv = j.at("lambda_adv").get<double>();
    cfg.generator_lr = j.at("generator_lr").get<double>();
    cfg.discriminator_lr = j.at("discriminator_lr").get<double>();
    cfg.mode = discriminator_mode_from_string(j.at("discriminator_mode").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.steps = j.at("steps").get<int>();
    return cfg;
}

ImageBlenderTrainer::ImageBlenderTrainer(const BlendGeneratorConfig& cfg)
    : cfg_(cfg), gen_(cfg), discs_(DiscriminatorSet::create(cfg)), perceptual_(),
      opt_g_(gen_.params(), cfg.generator_lr) {
    for (const auto& m : discs_.members())
        opt_d_.emplace_back(m.disc->params(), cfg.discriminator_lr);
}

std::string ImageBlenderTrainer::log_header() const {
    std::string h = "step,L_per,L_l1,L_msssim,L_adv,total";
    for (const auto& col : discs_.log_columns()) h += "," + col;
    return h;
}

void ImageBlenderTrainer::save_checkpoint(std::ostream& out) const {
    out.write(kMagic, 4);
    write_u32(out, kVersion);
    write_string(out, gib_config_to_json(cfg_));
    write_u64(out, static_cast<std::uint64_t>(step_counter_));
    write_params(out, gen_.params());
    write_u64(out, discs_.members().size());
    for (const auto& m : discs_.members()) {
        write_string(out, m.name);
        write_params(out, m.disc->params());
    }
    opt_g_.save(out);
    for (const auto& o : opt_d_) o.save(out);
}

void ImageBlenderTrainer::save_checkpoint(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save_checkpoint: cannot write " + path);
    save_checkpoint(out);
}

void ImageBlenderTrainer::load_state(std::istream& in) {
    step_counter_ = static_cast<std::int64_t>(read_u64(in));
    read_params(in, gen_.params());
    const std::uint64_t nd = read_u64(in);
    if (nd != discs_.members().size())
        throw IoError("checkpoint: discriminator count mismatch");
    for (auto& m : discs_.members()) {
        const std::string name = read_string(in);
        if (name != m.name) throw IoError("checkpoint: discriminator order mismatch");
        read_params(in, m.disc->params());
    }
    opt_g_.load(in);
    for (auto& o : opt_d_) o.load(in);
}

std::unique_ptr<ImageBlenderTrainer> ImageBlenderTrainer::from_checkpoint(
    const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("from_checkpoint: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("from_checkpoint: bad magic in " + path + " (expected GIB1)");
    const std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw IoError("from_checkpoint: unsupported version " + std::to_string(version));
    const BlendGeneratorConfig cfg = gib_config_from_json(read_string(in));
    auto trainer = std::make_unique<ImageBlenderTrainer>(cfg);
    trainer->load_state(in);
    return trainer;
}

std::vector<ImageTrainLogRow> ImageBlenderTrainer::train(
    const std::vector<ImagePairSample>& pairs, int steps) {
    if (pairs.empty()) throw DimensionError("train: empty pair dataset");
    const int res = cfg_.resolution;
    for (const auto& p : pairs) {
        if (p.img1.width() != res || p.img2.width() != res || p.sup1.width() != res ||
            p.sup2.width() != res)
            throw DimensionError("train: pair " + p.id + " resolution mismatch");
        if (p.l1.count() != cfg_.landmark_count || p.l2.count() != cfg_.landmark_count ||
            p.lm.count() != cfg_.landmark_count)
            throw DimensionError("train: pair " + p.id + " landmark count mismatch");
    }

    // heatmaps are pure functions of the landmarks; render once per pair
    std::vector<Tensor> heat1, heat2, heat_m;
    for (const auto& p : pairs) {
        heat1.push_back(render_heatmaps(p.l1, res, cfg_.sigma_px()));
        heat2.push_back(render_heatmaps(p.l2, res, cfg_.sigma_px()));
        heat_m.push_back(render_heatmaps(p.lm, res, cfg_.sigma_px()));
    }

    std::vector<ImageTrainLogRow> log;
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

        const std::size_t pi = static_cast<std::size_t>(step_counter_) % pairs.size();
        const ImagePairSample& pair = pairs[pi];

        const Var heat_lm = constant(heat_m[pi]);
        const Var img[2] = {constant(pair.img1.to_tensor()), constant(pair.img2.to_tensor())};
        const Var heat[2] = {constant(heat1[pi]), constant(heat2[pi])};
        const Var sup[2] = {constant(pair.sup1.to_tensor()), constant(pair.sup2.to_tensor())};

        // one generator pass per subject; reused for the generator update
        const Var fake[2] = {gen_.generate_graph(img[0], heat[0], heat_lm),
                             gen_.generate_graph(img[1], heat[1], heat_lm)};
        const Var fake_detached[2] = {constant(fake[0]->value), constant(fake[1]->value)};

        ImageTrainLogRow row;

        // ---- discriminator updates ----
        for (std::size_t di = 0; di < discs_.members().size(); ++di) {
            const auto& member = discs_.members()[di];
            std::vector<Var> terms;
            for (int subject = 0; subject < 2; ++subject) {
                const Var d_real = discs_.forward(member, sup[subject], heat_lm, img[subject]);
                const Var d_fake =
                    discs_.forward(member, fake_detached[subject], heat_lm, img[subject]);
                const Var real_term = scale(mean_all(log_act(d_real)), -1.0);
                const Var fake_term = scale(
                    mean_all(log_act(sub(constant(Tensor::full(d_fake->value.shape(), 1.0)), d_fake))),
                    -1.0);
                terms.push_back(add(real_term, fake_term));
            }
            const Var d_loss = scale(add(terms[0], terms[1]), 0.5);
            backward(d_loss);
            opt_d_[di].step();
            row.d_losses.emplace_back(member.name, scalar_of(d_loss));
        }

        // ---- generator update (adversarial term through the updated Ds) ----
        std::vector<Var> totals;
        double sum_per = 0.0, sum_l1 = 0.0, sum_ms = 0.0, sum_adv = 0.0;
        for (int subject = 0; subject < 2; ++subject) {
            std::vector<Var> disc_fakes;
            for (const auto& member : discs_.members())
                disc_fakes.push_back(discs_.forward(member, fake[subject], heat_lm, img[subject]));
            const ImageLossGraph lg =
                image_blend_loss_graph(fake[subject], sup[subject], disc_fakes, cfg_, perceptual_);
            totals.push_back(lg.total);
            const ImageLossParts parts = lg.values();
            sum_per += parts.perceptual;
            sum_l1 += parts.l1;
            sum_ms += parts.msssim;
            sum_adv += parts.adv;
        }
        const Var g_loss = scale(add(totals[0], totals[1]), 0.5);
        backward(g_loss);
        opt_g_.step();

        ++step_counter_;
        row.step = step_counter_;
        row.l_per = 0.5 * sum_per;
        row.l_l1 = 0.5 * sum_l1;
        row.l_msssim = 0.5 * sum_ms;
        row.l_adv = 0.5 * sum_adv;
        row.total = scalar_of(g_loss);
        log.push_back(row);

        bool finite = std::isfinite(row.total);
        for (const auto& [name, v] : row.d_losses) finite = finite && std::isfinite(v);
        if (!finite) {
            std::istringstream restore(snapshot_bytes);
            char magic[4];
            restore.read(magic, 4);
            read_u32(restore);
            read_string(restore);
            load_state(restore);
            throw DivergenceError("image blender diverged at step " + std::to_string(row.step) +
                                  "; parameters restored to the last snapshot");
        }
    }
    return log;
}

}  // namespace morphkit::gib
