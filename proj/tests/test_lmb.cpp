#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morphkit/common/error.hpp"

#include <fstream>
#include <sstream>

#include "morphkit/lmb/trainer.hpp"
#include "test_util.hpp"

using namespace morphkit;
using namespace morphkit::lmb;
using geom::LandmarkSet;
using geom::Vec2;

namespace {

LandmarkSet make_set(std::vector<Vec2> pts) { return LandmarkSet(std::move(pts)); }

LandmarkSet random_set(int k, Rng& rng, double lo = 0.2, double hi = 0.8) {
    std::vector<Vec2> pts;
    for (int i = 0; i < k; ++i) pts.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
    return LandmarkSet(std::move(pts));
}

BlenderNetConfig tiny_config(int k = 8) {
    BlenderNetConfig cfg;
    cfg.landmark_count = k;
    cfg.encoder_hidden = {24, 16};
    cfg.code_dim = 12;
    cfg.disc_hidden = {16, 12};
    cfg.batch_size = 4;
    cfg.steps = 50;
    cfg.seed = 99;
    return cfg;
}

// plain matrix-arithmetic re-implementation of the blender forward pass,
// reading weights straight out of the parameter store
std::pair<std::vector<double>, std::vector<double>> forward_oracle(const LandmarkBlender& b,
                                                                   const LandmarkSet& l1,
                                                                   const LandmarkSet& l2) {
    auto flat = [](const LandmarkSet& l) {
        std::vector<double> v;
        for (int i = 0; i < l.count(); ++i) {
            v.push_back(l.point(i).x);
            v.push_back(l.point(i).y);
        }
        return v;
    };
    std::vector<double> x = flat(l1);
    const std::vector<double> x2 = flat(l2);
    x.insert(x.end(), x2.begin(), x2.end());

    auto dense_tanh = [&](const char* wname, const char* bname, const std::vector<double>& in,
                          bool act) {
        const nn::Tensor& w = b.params().get(wname)->value;
        const nn::Tensor& bias = b.params().get(bname)->value;
        std::vector<double> out(static_cast<std::size_t>(w.dim(0)));
        for (int o = 0; o < w.dim(0); ++o) {
            double acc = bias[o];
            for (int i = 0; i < w.dim(1); ++i) acc += w.at(o, i) * in[static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(o)] = act ? std::tanh(acc) : acc;
        }
        return out;
    };
    const auto h1 = dense_tanh("enc.w1", "enc.b1", x, true);
    const auto h2 = dense_tanh("enc.w2", "enc.b2", h1, true);
    const auto code = dense_tanh("enc.w3", "enc.b3", h2, true);
    return {dense_tanh("head1.w", "head1.b", code, false),
            dense_tanh("head2.w", "head2.b", code, false)};
}

}  // namespace

TEST_CASE("blend_landmarks implements the shifted average") {
    SUBCASE("zero shifts give the plain midpoint") {
        const LandmarkSet l1 = make_set({{0.2, 0.2}, {0.4, 0.6}});
        const LandmarkSet l2 = make_set({{0.6, 0.4}, {0.2, 0.2}});
        const LandmarkSet lm =
            blend_landmarks(l1, l2, LandmarkShift::zeros(2), LandmarkShift::zeros(2));
        CHECK(lm.point(0).x == doctest::Approx(0.4));
        CHECK(lm.point(0).y == doctest::Approx(0.3));
    }
    SUBCASE("hand-evaluated shifted case") {
        // l1={(0,0)}, l2={(.2,.2)}, s1={(.1,.1)}, s2={(-.1,-.1)} -> {(.1,.1)}
        const LandmarkSet l1 = make_set({{0.0, 0.0}});
        const LandmarkSet l2 = make_set({{0.2, 0.2}});
        const LandmarkShift s1{{{0.1, 0.1}}};
        const LandmarkShift s2{{{-0.1, -0.1}}};
        const LandmarkSet lm = blend_landmarks(l1, l2, s1, s2);
        CHECK(lm.point(0).x == doctest::Approx(0.1));
        CHECK(lm.point(0).y == doctest::Approx(0.1));
    }
    SUBCASE("identity when both inputs coincide") {
        const LandmarkSet l = make_set({{0.3, 0.7}, {0.5, 0.5}});
        const LandmarkSet lm = blend_landmarks(l, l, LandmarkShift::zeros(2), LandmarkShift::zeros(2));
        CHECK(lm == l);
    }
    SUBCASE("swapping the operand pairs leaves the blend unchanged") {
        Rng rng(2);
        const LandmarkSet l1 = random_set(6, rng), l2 = random_set(6, rng);
        LandmarkShift s1 = LandmarkShift::zeros(6), s2 = LandmarkShift::zeros(6);
        for (int i = 0; i < 6; ++i) {
            s1.deltas[i] = {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)};
            s2.deltas[i] = {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)};
        }
        CHECK(blend_landmarks(l1, l2, s1, s2) == blend_landmarks(l2, l1, s2, s1));
    }
    SUBCASE("count mismatch is rejected") {
        CHECK_THROWS_AS(blend_landmarks(make_set({{0, 0}}), make_set({{0, 0}, {1, 1}}),
                                        LandmarkShift::zeros(1), LandmarkShift::zeros(2)),
                        DimensionError);
    }
}

TEST_CASE("geometric losses match hand-evaluated values") {
    SUBCASE("distance loss zero at coincidence") {
        const LandmarkSet l = make_set({{0.1, 0.2}, {0.3, 0.4}});
        CHECK(geometric_distance_loss(l, l, l) == 0.0);
        CHECK(geometric_balance_loss(l, l, l) == 0.0);
    }
    SUBCASE("distance loss hand case: midpoint of collinear points") {
        const LandmarkSet lm = make_set({{1.0, 0.0}});
        const LandmarkSet l1 = make_set({{0.0, 0.0}});
        const LandmarkSet l2 = make_set({{2.0, 0.0}});
        CHECK(geometric_distance_loss(lm, l1, l2) == doctest::Approx(1.0));
    }
    SUBCASE("distance loss is homogeneous under coordinate scaling") {
        Rng rng(4);
        const LandmarkSet lm = random_set(5, rng), l1 = random_set(5, rng), l2 = random_set(5, rng);
        const double base = geometric_distance_loss(lm, l1, l2);
        auto scaled = [](const LandmarkSet& l, double c) {
            std::vector<Vec2> pts;
            for (int i = 0; i < l.count(); ++i) pts.push_back({c * l.point(i).x, c * l.point(i).y});
            return LandmarkSet(pts);
        };
        CHECK(geometric_distance_loss(scaled(lm, 3.0), scaled(l1, 3.0), scaled(l2, 3.0)) ==
              doctest::Approx(3.0 * base).epsilon(1e-12));
    }
    SUBCASE("balance loss hand case") {
        const LandmarkSet lm = make_set({{0.0, 0.0}});
        const LandmarkSet l1 = make_set({{1.0, 0.0}});
        const LandmarkSet l2 = make_set({{3.0, 0.0}});
        CHECK(geometric_balance_loss(lm, l1, l2) == doctest::Approx(2.0));
    }
    SUBCASE("balance loss is symmetric in l1/l2") {
        Rng rng(6);
        const LandmarkSet lm = random_set(7, rng), l1 = random_set(7, rng), l2 = random_set(7, rng);
        CHECK(geometric_balance_loss(lm, l1, l2) ==
              doctest::Approx(geometric_balance_loss(lm, l2, l1)).epsilon(1e-15));
    }
    SUBCASE("balance bounded by twice the distance loss") {
        Rng rng(8);
        for (int trial = 0; trial < 50; ++trial) {
            const LandmarkSet lm = random_set(6, rng), l1 = random_set(6, rng),
                              l2 = random_set(6, rng);
            CHECK(geometric_balance_loss(lm, l1, l2) <=
                  2.0 * geometric_distance_loss(lm, l1, l2) + 1e-12);
        }
    }
}

TEST_CASE("adversarial loss closed forms") {
    CHECK(landmark_adversarial_loss(0.5, 0.5, AdversarialSide::Discriminator) ==
          doctest::Approx(2.0 * std::log(2.0)));
    CHECK(landmark_adversarial_loss(0.9, 0.1, AdversarialSide::Discriminator) ==
          doctest::Approx(-(std::log(0.9) + std::log(0.9))));
    CHECK(landmark_adversarial_loss(0.5, 1.0 - 1e-9, AdversarialSide::Generator) ==
          doctest::Approx(0.0).epsilon(1e-6));
    CHECK_THROWS_AS(landmark_adversarial_loss(0.0, 0.5, AdversarialSide::Discriminator),
                    DimensionError);
    CHECK_THROWS_AS(landmark_adversarial_loss(0.5, 1.0, AdversarialSide::Generator),
                    DimensionError);
}

TEST_CASE("total landmark loss weighting") {
    const LandmarkLossWeights defaults{};  // 100 / 10 / 0.1
    CHECK(total_landmark_loss(0, 0, 0, defaults) == 0.0);
    CHECK(total_landmark_loss(1, 1, 1, defaults) == doctest::Approx(110.1));
    CHECK(total_landmark_loss(0, 0, 3, {0, 0, 1}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(total_landmark_loss(std::nan(""), 0, 0, defaults), DivergenceError);
}

TEST_CASE("loss gradients match central finite differences") {
    Rng rng(10);
    const int k = 6;
    const LandmarkSet l1 = random_set(k, rng), l2 = random_set(k, rng);
    // keep lm away from the |.| kinks: no coordinate coincides with l1/l2
    std::vector<Vec2> lm_pts;
    for (int i = 0; i < k; ++i) lm_pts.push_back({rng.uniform(1.2, 1.8), rng.uniform(1.2, 1.8)});
    nn::Tensor lm_flat({2 * k});
    for (int i = 0; i < k; ++i) {
        lm_flat[2 * i] = lm_pts[i].x;
        lm_flat[2 * i + 1] = lm_pts[i].y;
    }
    const nn::Var l1f = flatten_landmarks(l1), l2f = flatten_landmarks(l2);
    const LandmarkLossWeights w{};

    auto as_set = [&](const nn::Tensor& t) {
        std::vector<Vec2> pts;
        for (int i = 0; i < k; ++i) pts.push_back({t[2 * i], t[2 * i + 1]});
        return LandmarkSet(pts);
    };

    SUBCASE("L_GD") {
        const nn::Var lm = nn::leaf(lm_flat);
        backward(geometric_distance_loss_graph(lm, l1f, l2f));
        const double err = testutil::fd_max_rel_err(
            lm_flat, [&](const nn::Tensor& t) { return geometric_distance_loss(as_set(t), l1, l2); },
            lm->grad);
        CHECK(err <= 1e-4);
    }
    SUBCASE("L_GB") {
        const nn::Var lm = nn::leaf(lm_flat);
        backward(geometric_balance_loss_graph(lm, l1f, l2f));
        const double err = testutil::fd_max_rel_err(
            lm_flat, [&](const nn::Tensor& t) { return geometric_balance_loss(as_set(t), l1, l2); },
            lm->grad);
        CHECK(err <= 1e-4);
    }
    SUBCASE("weighted total (adversarial term held fixed)") {
        const nn::Var lm = nn::leaf(lm_flat);
        const nn::Var total = nn::add(nn::scale(geometric_distance_loss_graph(lm, l1f, l2f), w.lambda_gd),
                                      nn::scale(geometric_balance_loss_graph(lm, l1f, l2f), w.lambda_gb));
        backward(total);
        const double err = testutil::fd_max_rel_err(
            lm_flat,
            [&](const nn::Tensor& t) {
                return w.lambda_gd * geometric_distance_loss(as_set(t), l1, l2) +
                       w.lambda_gb * geometric_balance_loss(as_set(t), l1, l2);
            },
            lm->grad);
        CHECK(err <= 1e-4);
    }
}

TEST_CASE("predict_shifts: init contract, determinism, forward oracle") {
    SUBCASE("zero-initialized shift heads emit all-zero shifts") {
        BlenderNetConfig cfg = tiny_config();
        cfg.zero_init_shift_head = true;
        const LandmarkBlender b(cfg);
        Rng rng(12);
        const auto [s1, s2] = b.predict_shifts(random_set(8, rng), random_set(8, rng));
        for (int i = 0; i < 8; ++i) {
            CHECK(s1.deltas[i].x == 0.0);
            CHECK(s1.deltas[i].y == 0.0);
            CHECK(s2.deltas[i].x == 0.0);
            CHECK(s2.deltas[i].y == 0.0);
        }
        // the blend then reduces to the traditional average, exactly
        const LandmarkSet l1 = random_set(8, rng), l2 = random_set(8, rng);
        CHECK(b.blend(l1, l2) == geom::average_landmarks(l1, l2));
    }
    SUBCASE("fixed seed + fixed inputs give bit-identical shifts") {
        const LandmarkBlender b(tiny_config());
        Rng rng(13);
        const LandmarkSet l1 = random_set(8, rng), l2 = random_set(8, rng);
        const auto [a1, a2] = b.predict_shifts(l1, l2);
        const auto [b1, b2] = b.predict_shifts(l1, l2);
        for (int i = 0; i < 8; ++i) {
            CHECK(a1.deltas[i].x == b1.deltas[i].x);
            CHECK(a2.deltas[i].y == b2.deltas[i].y);
        }
    }
    SUBCASE("matches the straight-line matrix oracle within 1e-6") {
        const LandmarkBlender b(tiny_config());
        Rng rng(14);
        const LandmarkSet l1 = random_set(8, rng), l2 = random_set(8, rng);
        const auto [s1, s2] = b.predict_shifts(l1, l2);
        const auto [o1, o2] = forward_oracle(b, l1, l2);
        for (int i = 0; i < 8; ++i) {
            CHECK(std::fabs(s1.deltas[i].x - o1[2 * i]) < 1e-6);
            CHECK(std::fabs(s1.deltas[i].y - o1[2 * i + 1]) < 1e-6);
            CHECK(std::fabs(s2.deltas[i].x - o2[2 * i]) < 1e-6);
            CHECK(std::fabs(s2.deltas[i].y - o2[2 * i + 1]) < 1e-6);
        }
    }
    SUBCASE("landmark count mismatch is rejected") {
        const LandmarkBlender b(tiny_config());
        Rng rng(15);
        CHECK_THROWS_AS(b.predict_shifts(random_set(7, rng), random_set(8, rng)), DimensionError);
    }
}

TEST_CASE("discriminator output range and determinism") {
    const BlenderNetConfig cfg = tiny_config();
    const LandmarkDiscriminator d(cfg);
    Rng rng(16);
    for (int i = 0; i < 10; ++i) {
        const double p = d.discriminate(random_set(8, rng, -2.0, 2.0));
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
    const LandmarkSet l = random_set(8, rng);
    CHECK(d.discriminate(l) == d.discriminate(l));
}

TEST_CASE("training: parameter movement, loss drop, determinism, checkpoints") {
    BlenderNetConfig cfg = tiny_config();
    cfg.steps = 120;
    Rng rng(17);
    std::vector<LandmarkPair> pairs;
    std::vector<LandmarkSet> pool;
    for (int i = 0; i < 4; ++i) {
        pairs.push_back({"p" + std::to_string(i), random_set(8, rng), random_set(8, rng)});
        pool.push_back(random_set(8, rng));
        pool.push_back(random_set(8, rng));
    }

    SUBCASE("one step changes parameters") {
        LandmarkBlenderTrainer t(cfg);
        const nn::Tensor before = t.blender().params().get("enc.w1")->value;
        t.train(pairs, pool, 1);
        const nn::Tensor& after = t.blender().params().get("enc.w1")->value;
        bool changed = false;
        for (std::int64_t i = 0; i < before.size(); ++i)
            if (before[i] != after[i]) changed = true;
        CHECK(changed);
    }
    SUBCASE("loss falls and curves are bit-reproducible across seeds") {
        LandmarkBlenderTrainer ta(cfg), tb(cfg);
        const auto la = ta.train(pairs, pool, cfg.steps);
        const auto lb = tb.train(pairs, pool, cfg.steps);
        REQUIRE(la.size() == lb.size());
        for (std::size_t i = 0; i < la.size(); ++i) {
            CHECK(la[i].total == lb[i].total);
            CHECK(la[i].d_loss == lb[i].d_loss);
        }
        double early = 0.0, late = 0.0;
        for (int i = 0; i < 10; ++i) early += la[i].total;
        for (std::size_t i = la.size() - 10; i < la.size(); ++i) late += la[i].total;
        CHECK(late < early);
    }
    SUBCASE("checkpoint round-trips bit-exactly and resumes the step counter") {
        testutil::TempDir tmp("lmbckpt");
        LandmarkBlenderTrainer t(cfg);
        t.train(pairs, pool, 7);
        const std::string path = tmp / "blender.lmb";
        t.save_checkpoint(path);

        auto r = LandmarkBlenderTrainer::from_checkpoint(path);
        CHECK(r->step_counter() == 7);
        std::ostringstream a, b;
        t.save_checkpoint(a);
        r->save_checkpoint(b);
        CHECK(a.str() == b.str());

        // resumed training continues the counter and matches uninterrupted
        // training bit-for-bit
        const auto resumed = r->train(pairs, pool, 5);
        CHECK(resumed.front().step == 8);
        LandmarkBlenderTrainer full(cfg);
        const auto whole = full.train(pairs, pool, 12);
        CHECK(whole.back().total == resumed.back().total);
    }
    SUBCASE("bad magic is rejected") {
        testutil::TempDir tmp("lmbbad");
        std::ofstream out(tmp / "x.lmb", std::ios::binary);
        out << "NOPE";
        out.close();
        CHECK_THROWS_WITH_AS(LandmarkBlenderTrainer::from_checkpoint(tmp / "x.lmb"),
                             doctest::Contains("LMB1"), IoError);
    }
}
