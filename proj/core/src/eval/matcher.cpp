#include "morphkit/eval/matcher.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "morphkit/common/error.hpp"
#include "morphkit/common/rng.hpp"
#include "morphkit/io/png_io.hpp"

namespace morphkit::eval {

std::vector<double> MatcherInterface::embed_path(const std::string& path) {
    return embed(io::load_png(path));
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw DimensionError("cosine_similarity: embedding size mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

constexpr int kPatch = 16;    // downsample target
constexpr int kEmbedDim = 64;

class ToyMatcher final : public MatcherInterface {
public:
    explicit ToyMatcher(std::uint64_t seed) : seed_(seed) {
        Rng rng(seed);
        proj_.resize(static_cast<std::size_t>(kEmbedDim) * kPatch * kPatch);
        for (double& v : proj_) v = rng.normal();
    }

    std::vector<double> embed(const geom::FaceImage& image) override {
        // grayscale area downsample to kPatch x kPatch
        std::vector<double> gray(static_cast<std::size_t>(kPatch) * kPatch, 0.0);
        const int w = image.width(), h = image.height();
        std::vector<int> counts(gray.size(), 0);
        for (int y = 0; y < h; ++y) {
            const int gy = std::min(kPatch - 1, y * kPatch / h);
            for (int x = 0; x < w; ++x) {
                const int gx = std::min(kPatch - 1, x * kPatch / w);
                const double v =
                    (image.at(0, y, x) + image.at(1, y, x) + image.at(2, y, x)) / 3.0;
                gray[static_cast<std::size_t>(gy) * kPatch + gx] += v;
                ++counts[static_cast<std::size_t>(gy) * kPatch + gx];
            }
        }
        for (std::size_t i = 0; i < gray.size(); ++i)
            if (counts[i] > 0) gray[i] /= counts[i];
        // mean-center so the projection responds to identity structure
        // rather than overall brightness
        double mean = 0.0;
        for (double v : gray) mean += v;
        mean /= static_cast<double>(gray.size());
        for (double& v : gray) v -= mean;

        std::vector<double> emb(kEmbedDim, 0.0);
        for (int o = 0; o < kEmbedDim; ++o) {
            const double* row = proj_.data() + static_cast<std::size_t>(o) * kPatch * kPatch;
            double acc = 0.0;
            for (std::size_t i = 0; i < gray.size(); ++i) acc += row[i] * gray[i];
            emb[static_cast<std::size_t>(o)] = acc;
        }
        double norm = 0.0;
        for (double v : emb) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > 0.0)
            for (double& v : emb) v /= norm;
        return emb;
    }

    std::string id() const override { return "toy-matcher/" + std::to_string(seed_); }

private:
    std::uint64_t seed_;
    std::vector<double> proj_;
};

class ExternalMatcher final : public MatcherInterface {
public:
    explicit ExternalMatcher(std::string command) : command_(std::move(command)) {}

    std::vector<double> embed(const geom::FaceImage& image) override {
        // plugins consume files; round-trip through a temp PNG
        const std::string tmp = "/tmp/morphkit_matcher_input.png";
        io::save_png(image, tmp);
        return embed_path(tmp);
    }

    std::vector<double> embed_path(const std::string& path) override {
        const std::string cmdline = command_ + " '" + path + "'";
        std::FILE* pipe = popen(cmdline.c_str(), "r");
        if (!pipe) throw IoError("external_matcher: cannot run: " + cmdline);
        std::string output;
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
        const int status = pclose(pipe);
        if (status != 0)
            throw IoError("external_matcher: command failed (status " + std::to_string(status) +
                          "): " + cmdline);
        std::istringstream ss(output);
        std::vector<double> emb;
        double v;
        while (ss >> v) {
            if (!std::isfinite(v)) throw ParseError("external_matcher: non-finite embedding value");
            emb.push_back(v);
        }
        if (emb.empty()) throw ParseError("external_matcher: empty embedding from: " + cmdline);
        return emb;
    }

    std::string id() const override { return "external/" + command_; }

private:
    std::string command_;
};

}  // namespace

std::unique_ptr<MatcherInterface> toy_matcher(std::uint64_t seed) {
    return std::make_unique<ToyMatcher>(seed);
}

std::unique_ptr<MatcherInterface> external_matcher(const std::string& command) {
    return std::make_unique<ExternalMatcher>(command);
}

}  // namespace morphkit::eval
