#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morphkit/common/error.hpp"

#include <algorithm>

#include "morphkit/eval/matcher.hpp"
#include "morphkit/eval/metrics.hpp"
#include "morphkit/eval/quality.hpp"
#include "morphkit/eval/vulnerability.hpp"
#include "morphkit/io/png_io.hpp"
#include "test_util.hpp"

using namespace morphkit;
using namespace morphkit::eval;

namespace {

// brute-force sweep oracle shared by the bpcer_at_apcer and det tests
struct SweepPoint {
    double thr, apcer, bpcer;
};

std::vector<SweepPoint> sweep_oracle(const std::vector<double>& attack,
                                     const std::vector<double>& bona) {
    std::vector<double> thresholds = attack;
    thresholds.insert(thresholds.end(), bona.begin(), bona.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    thresholds.push_back(thresholds.back() + 1.0);
    std::vector<SweepPoint> out;
    for (double t : thresholds) {
        double a = 0, b = 0;
        for (double s : attack)
            if (s < t) ++a;
        for (double s : bona)
            if (s >= t) ++b;
        out.push_back({t, a / attack.size(), b / bona.size()});
    }
    return out;
}

// independent SSIM reference: direct formula translation with an explicitly
// normalized 2-D Gaussian window over the valid region
double ssim_reference(const geom::FaceImage& x, const geom::FaceImage& y) {
    const int win = 11;
    const double sigma = 1.5;
    double kernel[11][11];
    double ksum = 0.0;
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
            const double di = i - 5.0, dj = j - 5.0;
            kernel[i][j] = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
            ksum += kernel[i][j];
        }
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) kernel[i][j] /= ksum;

    const double c1 = 0.0001, c2 = 0.0009;
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        int count = 0;
        for (int oy = 0; oy + win <= x.height(); ++oy)
            for (int ox = 0; ox + win <= x.width(); ++ox) {
                double mx = 0, my = 0, xx = 0, yy = 0, xy = 0;
                for (int i = 0; i < win; ++i)
                    for (int j = 0; j < win; ++j) {
                        const double a = x.at(c, oy + i, ox + j);
                        const double b = y.at(c, oy + i, ox + j);
                        mx += kernel[i][j] * a;
                        my += kernel[i][j] * b;
                        xx += kernel[i][j] * a * a;
                        yy += kernel[i][j] * b * b;
                        xy += kernel[i][j] * a * b;
                    }
                const double sx = xx - mx * mx, sy = yy - my * my, sxy = xy - mx * my;
                acc += ((2 * mx * my + c1) * (2 * sxy + c2)) /
                       ((mx * mx + my * my + c1) * (sx + sy + c2));
                ++count;
            }
        total += acc / count;
    }
    return total / 3.0;
}

}  // namespace

TEST_CASE("toy matcher: self similarity, determinism, noise monotonicity") {
    const auto matcher = toy_matcher(7);
    const geom::FaceImage img = testutil::smooth_image(32, 32);
    const auto e1 = matcher->embed(img);
    const auto e2 = matcher->embed(img);
    CHECK(e1 == e2);
    CHECK(cosine_similarity(e1, e1) == doctest::Approx(1.0).epsilon(1e-12));

    // similarity decreases as noise amplitude grows on a 5-level fixture
    Rng rng(51);
    std::vector<double> noise(img.data().size());
    for (double& v : noise) v = rng.uniform(-1.0, 1.0);
    double prev = 2.0;
    for (const double amp : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        geom::FaceImage noisy = img;
        for (std::size_t i = 0; i < noisy.data().size(); ++i)
            noisy.data()[i] = std::clamp(noisy.data()[i] + amp * noise[i], 0.0, 1.0);
        const double s = cosine_similarity(e1, matcher->embed(noisy));
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("threshold_at_far: quantile rule") {
    std::vector<double> scores;
    for (int i = 1; i <= 10; ++i) scores.push_back(i / 10.0);

    SUBCASE("far 0.1 on the 0.1..1.0 decade leaves exactly one score above") {
        CHECK(threshold_at_far(scores, 0.1) == doctest::Approx(0.9));
    }
    SUBCASE("large far returns the minimum score") {
        CHECK(threshold_at_far(scores, 0.9) == doctest::Approx(0.1));
    }
    SUBCASE("constant scores return that constant for any far") {
        CHECK(threshold_at_far({0.3, 0.3, 0.3}, 0.01) == doctest::Approx(0.3));
        CHECK(threshold_at_far({0.3, 0.3, 0.3}, 0.5) == doctest::Approx(0.3));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(threshold_at_far({}, 0.1), DimensionError);
        CHECK_THROWS_AS(threshold_at_far(scores, 0.0), ConfigError);
        CHECK_THROWS_AS(threshold_at_far(scores, 1.0), ConfigError);
    }
}

TEST_CASE("mmpmr: hand values, strictness, monotonicity, subset average") {
    SUBCASE("hand-evaluated 2/3") {
        CHECK(mmpmr_from_min_scores({0.8, 0.4, 0.9}, 0.5) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("all above gives 1, strict > at the max gives 0") {
        CHECK(mmpmr_from_min_scores({0.8, 0.9}, 0.1) == 1.0);
        CHECK(mmpmr_from_min_scores({0.8, 0.9}, 0.9) == 0.0);
    }
    SUBCASE("minimum over mated scores is used") {
        ScoreSet s;
        s.mated = {{0.9, 0.4}, {0.8, 0.85}};
        CHECK(mmpmr(s, 0.5) == doctest::Approx(0.5));
    }
    SUBCASE("monotonically non-increasing in tau") {
        Rng rng(53);
        std::vector<double> mins;
        for (int i = 0; i < 25; ++i) mins.push_back(rng.uniform());
        double prev = 1.1;
        for (double tau = 0.0; tau <= 1.0; tau += 0.05) {
            const double v = mmpmr_from_min_scores(mins, tau);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
    SUBCASE("concatenation gives the size-weighted average exactly") {
        Rng rng(55);
        std::vector<double> a, b;
        for (int i = 0; i < 7; ++i) a.push_back(rng.uniform());
        for (int i = 0; i < 13; ++i) b.push_back(rng.uniform());
        std::vector<double> both = a;
        both.insert(both.end(), b.begin(), b.end());
        const double tau = 0.4;
        const double lhs = mmpmr_from_min_scores(both, tau) * 20.0;
        const double rhs =
            mmpmr_from_min_scores(a, tau) * 7.0 + mmpmr_from_min_scores(b, tau) * 13.0;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    SUBCASE("empty inputs rejected") {
        CHECK_THROWS_AS(mmpmr_from_min_scores({}, 0.5), DimensionError);
        ScoreSet s;
        s.mated = {{}};
        CHECK_THROWS_AS(mmpmr(s, 0.5), DimensionError);
    }
}

TEST_CASE("apcer/bpcer: hand counts and conventions") {
    SUBCASE("perfect separation") {
        const auto [a, b] = apcer_bpcer({0.9, 0.8}, {0.1, 0.2}, 0.5);
        CHECK(a == 0.0);
        CHECK(b == 0.0);
    }
    SUBCASE("hand-counted halves") {
        const auto [a, b] = apcer_bpcer({0.4, 0.9}, {0.1, 0.6}, 0.5);
        CHECK(a == 0.5);
        CHECK(b == 0.5);
    }
    SUBCASE("threshold above every score classifies everything bona fide") {
        const auto [a, b] = apcer_bpcer({0.4, 0.9}, {0.1, 0.6}, 2.0);
        CHECK(a == 1.0);
        CHECK(b == 0.0);
    }
    SUBCASE("every attack sample is counted exactly once at any threshold") {
        Rng rng(57);
        std::vector<double> attack, bona;
        for (int i = 0; i < 9; ++i) attack.push_back(rng.uniform());
        for (int i = 0; i < 5; ++i) bona.push_back(rng.uniform());
        for (double thr = -0.1; thr <= 1.1; thr += 0.1) {
            const auto [a, b] = apcer_bpcer(attack, bona, thr);
            double misses = 0;
            for (double s : attack)
                if (!(s < thr)) ++misses;
            CHECK(a + misses / 9.0 == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("empty inputs rejected") {
        CHECK_THROWS_AS(apcer_bpcer({}, {0.5}, 0.5), DimensionError);
    }
}

TEST_CASE("det_curve: endpoints, monotonicity, pointwise agreement") {
    const std::vector<double> attack{0.8, 0.9, 0.7, 0.95};
    const std::vector<double> bona{0.1, 0.2, 0.3, 0.15};

    const auto det = det_curve(attack, bona);

    SUBCASE("separated supports include both endpoints") {
        bool has_10 = false, has_01 = false;
        for (const auto& p : det) {
            if (p.apcer == 1.0 && p.bpcer == 0.0) has_10 = true;
            if (p.apcer == 0.0 && p.bpcer == 1.0) has_01 = true;
        }
        CHECK(has_10);
        CHECK(has_01);
    }
    SUBCASE("APCER is non-increasing along the decreasing-threshold ordering") {
        for (std::size_t i = 1; i < det.size(); ++i) {
            CHECK(det[i].threshold < det[i - 1].threshold);
            CHECK(det[i].apcer <= det[i - 1].apcer);
        }
    }
    SUBCASE("every point reproduces a direct apcer_bpcer call") {
        for (const auto& p : det) {
            const auto [a, b] = apcer_bpcer(attack, bona, p.threshold);
            CHECK(p.apcer == a);
            CHECK(p.bpcer == b);
        }
    }
}

TEST_CASE("bpcer_at_apcer: separation, oracle agreement, det consistency") {
    SUBCASE("perfectly separated scores give 0 at any target") {
        for (double target : {0.01, 0.05, 0.1, 0.5}) {
            const auto r = bpcer_at_apcer({0.9, 0.8}, {0.1, 0.2}, target);
            CHECK(r.bpcer == 0.0);
            CHECK(r.reachable);
        }
    }
    SUBCASE("overlapping distributions match the exhaustive sweep oracle") {
        Rng rng(59);
        std::vector<double> attack, bona;
        for (int i = 0; i < 10; ++i) {
            attack.push_back(rng.uniform());
            bona.push_back(rng.uniform());
        }
        for (double target : {0.05, 0.1, 0.3}) {
            const auto mine = bpcer_at_apcer(attack, bona, target);
            // oracle: lowest bpcer whose apcer satisfies the target
            double best = 2.0;
            for (const auto& p : sweep_oracle(attack, bona))
                if (p.apcer <= target) best = std::min(best, p.bpcer);
            CHECK(mine.bpcer == doctest::Approx(best).epsilon(1e-12));
        }
    }
    SUBCASE("the returned point lies on the det curve") {
        const std::vector<double> attack{0.3, 0.6, 0.7, 0.65};
        const std::vector<double> bona{0.2, 0.5, 0.55, 0.4};
        const auto r = bpcer_at_apcer(attack, bona, 0.3);
        bool found = false;
        for (const auto& p : det_curve(attack, bona))
            if (p.threshold == r.threshold && p.bpcer == r.bpcer) found = true;
        CHECK(found);
    }
}

TEST_CASE("psnr/ssim/ms_ssim: closed forms and reference agreement") {
    const geom::FaceImage img = testutil::smooth_image(64, 64);

    SUBCASE("identical images hit the caps") {
        CHECK(psnr(img, img) == 100.0);
        CHECK(ssim(img, img) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ms_ssim(img, img) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("constant 0.1 offset gives exactly 20 dB") {
        geom::FaceImage shifted = img;
        geom::FaceImage base(64, 64);
        for (double& v : base.data()) v = 0.3;
        for (std::size_t i = 0; i < shifted.data().size(); ++i) shifted.data()[i] = 0.4;
        CHECK(psnr(shifted, base) == doctest::Approx(20.0).epsilon(1e-12));
    }
    SUBCASE("ssim is symmetric") {
        const geom::FaceImage other = testutil::smooth_image(64, 64, 1.3);
        CHECK(ssim(img, other) == doctest::Approx(ssim(other, img)).epsilon(1e-12));
    }
    SUBCASE("five fixture pairs match the independent reference within 1e-6") {
        Rng rng(61);
        for (int trial = 0; trial < 5; ++trial) {
            const geom::FaceImage a = testutil::smooth_image(32, 32, 0.7 * trial);
            geom::FaceImage b = a;
            for (double& v : b.data()) v = std::clamp(v + rng.uniform(-0.1, 0.1), 0.0, 1.0);
            CHECK(std::fabs(ssim(a, b) - ssim_reference(a, b)) < 1e-6);
        }
    }
    SUBCASE("dim mismatch rejected") {
        geom::FaceImage small(16, 16);
        CHECK_THROWS_AS(psnr(img, small), DimensionError);
    }
}

TEST_CASE("morph_quality averages the two parent references") {
    const geom::FaceImage p1 = testutil::smooth_image(32, 32, 0.1);
    const geom::FaceImage p2 = testutil::smooth_image(32, 32, 1.7);
    const geom::FaceImage morph = alpha_blend(p1, p2, 0.5);

    SUBCASE("identical morph and parents max out") {
        const QualityEntry e = morph_quality(p1, p1, p1);
        CHECK(e.psnr_avg == 100.0);
        CHECK(e.ssim_avg == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("equal parents reduce to the single-reference value") {
        const QualityEntry e = morph_quality(morph, p1, p1);
        CHECK(e.psnr_avg == doctest::Approx(psnr(morph, p1)).epsilon(1e-12));
        CHECK(e.ssim_avg == doctest::Approx(ssim(morph, p1)).epsilon(1e-12));
    }
    SUBCASE("distinct parents give the mean of two metric calls") {
        const QualityEntry e = morph_quality(morph, p1, p2);
        CHECK(e.psnr_avg == doctest::Approx(0.5 * (psnr(morph, p1) + psnr(morph, p2))));
        CHECK(e.ssim_avg == doctest::Approx(0.5 * (ssim(morph, p1) + ssim(morph, p2))));
    }
}

TEST_CASE("evaluate_vulnerability end to end on constructed fixtures") {
    testutil::TempDir tmp("vuln");
    const int n = 4;
    std::vector<std::pair<std::string, std::string>> genuine;
    std::vector<geom::FaceImage> faces;
    for (int i = 0; i < n; ++i) {
        faces.push_back(testutil::smooth_image(32, 32, 0.9 * i));
        const std::string path = tmp / ("subj" + std::to_string(i) + ".png");
        morphkit::io::save_png(faces.back(), path);
        genuine.emplace_back("subj" + std::to_string(i), path);
    }
    const auto matcher = toy_matcher(7);

    SUBCASE("morphs identical to their parents give MMPMR 1") {
        std::vector<MorphEntry> morphs;
        for (int i = 0; i < n; i += 2) {
            MorphEntry e;
            e.morph_id = "m" + std::to_string(i / 2);
            e.morph_path = genuine[i].second;  // the parent itself
            e.parents = {{genuine[i].first, genuine[i].second}};
            morphs.push_back(e);
        }
        const auto report = evaluate_vulnerability(morphs, genuine, *matcher, 0.2);
        CHECK(report.mmpmr_value == 1.0);
        CHECK(report.morphs_skipped == 0);
    }
    SUBCASE("noise morphs against a separated fixture give MMPMR 0") {
        Rng rng(63);
        std::vector<MorphEntry> morphs;
        for (int i = 0; i < n; i += 2) {
            const geom::FaceImage noise = testutil::random_image(32, 32, rng);
            const std::string path = tmp / ("noise" + std::to_string(i) + ".png");
            morphkit::io::save_png(noise, path);
            MorphEntry e;
            e.morph_id = "m" + std::to_string(i / 2);
            e.morph_path = path;
            e.parents = {{genuine[i].first, genuine[i].second},
                         {genuine[i + 1].first, genuine[i + 1].second}};
            morphs.push_back(e);
        }
        const auto report = evaluate_vulnerability(morphs, genuine, *matcher, 0.2);
        CHECK(report.mmpmr_value == 0.0);
    }
    SUBCASE("report MMPMR is recomputable from its own min scores; failures itemized") {
        std::vector<MorphEntry> morphs;
        MorphEntry good;
        good.morph_id = "good";
        good.morph_path = genuine[0].second;
        good.parents = {{genuine[0].first, genuine[0].second},
                        {genuine[1].first, genuine[1].second}};
        MorphEntry bad;
        bad.morph_id = "bad";
        bad.morph_path = tmp / "does_not_exist.png";
        bad.parents = good.parents;
        morphs.push_back(good);
        morphs.push_back(bad);

        const auto report = evaluate_vulnerability(morphs, genuine, *matcher, 0.2);
        CHECK(report.morphs_evaluated == 1);
        CHECK(report.morphs_skipped == 1);
        REQUIRE(report.errors.size() == 1);
        CHECK(report.errors[0].find("bad") == 0);

        std::vector<double> mins;
        for (const auto& [id, s] : report.per_morph_min) mins.push_back(s);
        CHECK(report.mmpmr_value == mmpmr_from_min_scores(mins, report.tau));
    }
}

TEST_CASE("external matcher plugin contract violations surface as errors") {
    CHECK_THROWS_AS(external_matcher("/bin/false")->embed_path("/tmp/nonexistent.png"), IoError);
    const auto empty = external_matcher("true");
    CHECK_THROWS_AS(empty->embed_path("/tmp/nonexistent.png"), ParseError);
}
