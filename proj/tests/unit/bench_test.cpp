#include <doctest.h>

#include <fixtures.hpp>

#include <rgnn/bench/linear.hpp>
#include <rgnn/bench/metrics.hpp>
#include <rgnn/bench/split.hpp>
#include <rgnn/bench/train.hpp>
#include <rgnn/core/error.hpp>
#include <rgnn/ingest/synth.hpp>
#include <rgnn/model/model.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

using namespace rgnn;
using namespace rgnn::bench;

namespace {

std::vector<int> balanced_labels(int n, int classes) {
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) labels.push_back(i % classes);
    return labels;
}

int count_class(const std::vector<std::size_t>& part, const std::vector<int>& labels, int c) {
    return static_cast<int>(std::count_if(part.begin(), part.end(), [&](std::size_t i) { return labels[i] == c; }));
}

}  // namespace

TEST_CASE("split: sizes, stratification, determinism, errors") {
    const auto labels = balanced_labels(100, 4);
    const auto s = split_dataset(labels, 4, {}, 3);
    CHECK(s.train.size() == 80);
    CHECK(s.validation.size() == 10);
    CHECK(s.test.size() == 10);
    for (int c = 0; c < 4; ++c) {
        const int v = count_class(s.validation, labels, c);
        CHECK(v >= 2);
        CHECK(v <= 3);
    }
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.validation.begin(), s.validation.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 100);
    CHECK(s == split_dataset(labels, 4, {}, 3));
    CHECK_FALSE(s == split_dataset(labels, 4, {}, 4));

    CHECK_THROWS_AS(split_dataset(labels, 4, {1.0, 0.0, 0.0}, 3), ConfigError);
    CHECK_THROWS_AS(split_dataset(labels, 4, {0.5, 0.2, 0.2}, 3), ConfigError);
    CHECK_THROWS_AS(split_dataset(balanced_labels(3, 3), 3, {}, 3), ConfigError);
}

TEST_CASE("split: per-class counts stay within one of proportional") {
    Rng rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        const int classes = 2 + static_cast<int>(rng.index(4));
        std::vector<int> labels;
        const int n = 40 + static_cast<int>(rng.index(200));
        for (int i = 0; i < n; ++i) labels.push_back(static_cast<int>(rng.index(static_cast<std::uint64_t>(classes))));
        SplitRatios r{0.7, 0.15, 0.15};
        if (trial % 2) {
            r.validation = rng.uniform(0.05, 0.3);
            r.test = rng.uniform(0.05, 0.3);
            r.train = 1.0 - r.validation - r.test;
        }
        const auto s = split_dataset(labels, classes, r, trial);
        for (int c = 0; c < classes; ++c) {
            const double nc = static_cast<double>(std::count(labels.begin(), labels.end(), c));
            CHECK(std::abs(count_class(s.train, labels, c) - nc * r.train) <= 1.0);
            CHECK(std::abs(count_class(s.validation, labels, c) - nc * r.validation) <= 1.0);
            CHECK(std::abs(count_class(s.test, labels, c) - nc * r.test) <= 1.0);
        }
    }
}

TEST_CASE("metrics: worked cases") {
    SUBCASE("three of four") {
        const std::vector<int> pred{0, 1, 2, 0}, gold{0, 1, 2, 3};
        const auto m = compute_metrics(pred, gold, 4);
        CHECK(m.accuracy == 0.75);
        CHECK(m.micro_f1 == 0.75);
        CHECK(m.count == 4);
    }
    SUBCASE("all predicted class 0 on balanced binary labels") {
        const std::vector<int> pred{0, 0, 0, 0}, gold{0, 1, 0, 1};
        const auto m = compute_metrics(pred, gold, 2);
        CHECK(m.per_class[1].f1 == 0.0);
        CHECK(std::abs(m.per_class[0].f1 - 2.0 / 3.0) < 1e-15);
        CHECK(std::abs(m.macro_f1 - 1.0 / 3.0) < 1e-15);
        CHECK(m.positive_f1() == 0.0);
        CHECK(m.confusion == std::vector<std::vector<long long>>{{2, 0}, {2, 0}});
    }
    SUBCASE("perfect") {
        const std::vector<int> v{0, 1, 2, 1};
        const auto m = compute_metrics(v, v, 3);
        CHECK(m.accuracy == 1.0);
        CHECK(m.micro_f1 == 1.0);
        CHECK(m.macro_f1 == 1.0);
    }
    CHECK_THROWS_AS(compute_metrics(std::vector<int>{0}, std::vector<int>{0, 1}, 2), Error);
    CHECK_THROWS_AS(compute_metrics(std::vector<int>{}, std::vector<int>{}, 2), Error);
    CHECK_THROWS_AS(compute_metrics(std::vector<int>{5}, std::vector<int>{0}, 2), Error);
}

TEST_CASE("metrics: identities over random inputs") {
    Rng rng(12);
    for (int t = 0; t < 200; ++t) {
        const int c = 2 + static_cast<int>(rng.index(5));
        const std::size_t n = 1 + rng.index(60);
        std::vector<int> pred(n), gold(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = static_cast<int>(rng.index(static_cast<std::uint64_t>(c)));
            gold[i] = static_cast<int>(rng.index(static_cast<std::uint64_t>(c)));
        }
        const auto m = compute_metrics(pred, gold, c);
        CHECK(m.micro_f1 == m.accuracy);
        long long total = 0;
        for (const auto& row : m.confusion)
            for (long long v : row) total += v;
        CHECK(total == static_cast<long long>(n));
        for (const auto& s : m.per_class) {
            CHECK(s.f1 >= 0.0);
            CHECK(s.f1 <= 1.0);
        }
        // consistent permutation of pairs
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(std::span(perm));
        std::vector<int> pp(n), gp(n);
        for (std::size_t i = 0; i < n; ++i) {
            pp[i] = pred[perm[i]];
            gp[i] = gold[perm[i]];
        }
        const auto mp = compute_metrics(pp, gp, c);
        CHECK(mp.macro_f1 == m.macro_f1);
        CHECK(mp.confusion == m.confusion);
    }
}

TEST_CASE("metrics: report and table") {
    const std::vector<int> pred{0, 1, 1}, gold{0, 1, 0};
    const auto m = compute_metrics(pred, gold, 2);
    const auto j = to_json(m);
    for (const char* key : {"count", "accuracy", "micro_f1", "macro_f1", "positive_f1", "per_class", "confusion"})
        CHECK(j.contains(key));
    std::ostringstream out;
    print_table(out, m);
    CHECK(out.str().find("macro-F1") != std::string::npos);
}

TEST_CASE("mean embedding features") {
    const embed::EmbeddingTable table({"a", "c"}, 2, {1.0, 2.0, 3.0, 6.0});
    const model::UserFeatureSource f(table);
    ingest::LinkSample s;
    s.link_id = "L";
    ingest::PostView p;
    p.author = "a";
    s.posts.push_back(p);
    CHECK(mean_embedding_features(s, f, FeatureMode::author) == nn::Vector{1.0, 2.0});
    CHECK(mean_embedding_features(s, f, FeatureMode::author_commenter) == nn::Vector{1.0, 2.0});
    s.posts.push_back(p);
    CHECK(mean_embedding_features(s, f, FeatureMode::author) == nn::Vector{1.0, 2.0});
    s.posts.pop_back();
    s.posts[0].commenters = {"c"};
    CHECK(mean_embedding_features(s, f, FeatureMode::author_commenter) == nn::Vector{2.0, 4.0});
    s.posts[0].commenters = {"unknown"};
    CHECK(mean_embedding_features(s, f, FeatureMode::author_commenter) == nn::Vector{0.5, 1.0});
}

TEST_CASE("linear models") {
    // separable: class = sign of x0 + x1
    Rng rng(13);
    nn::Matrix x(60, 2);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
        double a, b;
        do {
            a = rng.uniform(-1, 1);
            b = rng.uniform(-1, 1);
        } while (std::abs(a + b) < 0.2);
        x(i, 0) = a;
        x(i, 1) = b;
        y[i] = a + b > 0 ? 1 : 0;
    }
    for (LinearLoss loss : {LinearLoss::hinge, LinearLoss::logistic}) {
        LinearConfig cfg;
        cfg.loss = loss;
        cfg.epochs = 200;
        cfg.lr = 0.1;
        cfg.l2 = 0.0;
        const auto fit = train_linear(x, y, 2, cfg);
        int correct = 0;
        for (std::size_t i = 0; i < 60; ++i) correct += fit.model.predict(x.row(i)) == y[i];
        CHECK(correct == 60);
        CHECK(fit.epoch_loss.size() == 200);
        CHECK(fit.epoch_loss.back() < fit.epoch_loss.front());
        const auto again = train_linear(x, y, 2, cfg);
        CHECK(again.model.weights == fit.model.weights);
        CHECK(again.model.bias == fit.model.bias);

        cfg.l2 = 1e6;
        const auto shrunk = train_linear(x, y, 2, cfg);
        for (double w : shrunk.model.weights.data()) CHECK(std::abs(w) < 1e-6);
    }
    LinearModel tie{nn::Matrix(3, 2), nn::Vector(3, 0.0)};
    CHECK(tie.predict(nn::Vector{1.0, -1.0}) == 0);
    CHECK_THROWS_AS(train_linear(x, std::vector<int>(3, 0), 2, LinearConfig{}), DimensionError);
}

TEST_CASE("linear model selection uses validation micro-F1") {
    Rng rng(14);
    nn::Matrix x(40, 2), vx(10, 2);
    std::vector<int> y(40), vy(10);
    for (std::size_t i = 0; i < 50; ++i) {
        const double a = rng.uniform(-1, 1);
        auto& m = i < 40 ? x : vx;
        const std::size_t r = i < 40 ? i : i - 40;
        m(r, 0) = a;
        m(r, 1) = rng.uniform(-1, 1);
        (i < 40 ? y[r] : vy[r]) = a > 0;
    }
    LinearConfig cfg;
    cfg.epochs = 30;
    const auto fit = train_linear(x, y, 2, cfg, &vx, vy);
    REQUIRE(fit.val_micro_f1.size() == 30);
    const double best = *std::max_element(fit.val_micro_f1.begin(), fit.val_micro_f1.end());
    CHECK(fit.val_micro_f1[static_cast<std::size_t>(fit.selected_epoch)] == best);
    for (int e = 0; e < fit.selected_epoch; ++e) CHECK(fit.val_micro_f1[static_cast<std::size_t>(e)] < best);
}

TEST_CASE("neural training loop") {
    ingest::SynthConfig sc;
    sc.users = 120;
    sc.communities = 2;
    sc.classes = 2;
    sc.links_per_class = 20;
    const auto corpus = ingest::generate_synthetic(sc, 4);
    const auto ds = ingest::assemble_dataset(corpus.events, corpus.labels).dataset;
    Rng rng(15);
    const auto table = rgnn::testing::random_table(rng, 120, 6);
    embed::EmbeddingTable named(std::vector<std::string>([] {
                                    std::vector<std::string> u;
                                    for (int i = 0; i < 120; ++i) u.push_back(ingest::synth_user_id(i));
                                    return u;
                                }()),
                                6, table.values());
    const model::UserFeatureSource f(named);
    const auto split = split_dataset(ds, {}, 2);
    model::Hyperparams hp;
    hp.gcn_hidden = 8;
    hp.rnn_hidden = 8;
    hp.mlp_hidden = {8};
    hp.epochs = 4;
    hp.batch_size = 8;

    SUBCASE("zero epochs returns the initialization") {
        hp.epochs = 0;
        const auto r = train(ds, split, model::Variant::rgnn, hp, f);
        CHECK(r.history.train_loss.empty());
        CHECK(r.history.selected_epoch == 0);
        CHECK(r.params == model::init_params(model::Variant::rgnn, 6, 2, hp));
    }
    SUBCASE("deterministic history and valid selection") {
        const auto a = train(ds, split, model::Variant::noreply, hp, f);
        const auto b = train(ds, split, model::Variant::noreply, hp, f);
        CHECK(a.history.train_loss == b.history.train_loss);
        CHECK(a.history.val_micro_f1 == b.history.val_micro_f1);
        CHECK(a.params == b.params);
        REQUIRE(a.history.train_loss.size() == 4);
        const auto& v = a.history.val_micro_f1;
        const double best = *std::max_element(v.begin(), v.end());
        CHECK(v[static_cast<std::size_t>(a.history.selected_epoch)] == best);
        for (int e = 0; e < a.history.selected_epoch; ++e) CHECK(v[static_cast<std::size_t>(e)] < best);
    }
    SUBCASE("non-finite loss names the epoch") {
        auto prepared = model::prepare_samples(ds.samples, f, hp, model::Variant::traceminer);
        for (double& x : prepared[0].sequence.data()) x = std::numeric_limits<double>::quiet_NaN();
        const auto init = model::init_params(model::Variant::traceminer, 6, 2, hp);
        try {
            train_prepared(prepared, {}, init, hp);
            FAIL("expected DivergenceError");
        } catch (const DivergenceError& e) {
            CHECK(e.epoch() == 0);
        }
    }
}

TEST_CASE("Adam first step moves each coordinate by lr against the gradient sign") {
    Adam adam(3, 0.1);
    std::vector<double> p{1.0, 1.0, 1.0};
    adam.step(p, std::vector<double>{2.0, -0.5, 0.0});
    CHECK(std::abs(p[0] - 0.9) < 1e-7);
    CHECK(std::abs(p[1] - 1.1) < 1e-7);
    CHECK(p[2] == 1.0);
    CHECK_THROWS_AS(adam.step(p, std::vector<double>{1.0}), DimensionError);
}
