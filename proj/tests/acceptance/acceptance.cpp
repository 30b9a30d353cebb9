// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria (0 = all passed).

#include <fixtures.hpp>

#include <rgnn/app/model_io.hpp>
#include <rgnn/app/pipeline.hpp>
#include <rgnn/bench/linear.hpp>
#include <rgnn/bench/metrics.hpp>
#include <rgnn/bench/train.hpp>
#include <rgnn/embed/node2vec.hpp>
#include <rgnn/embed/sgns.hpp>
#include <rgnn/ingest/synth.hpp>
#include <rgnn/model/model.hpp>
#include <rgnn/nn/gradcheck.hpp>
#include <rgnn/nn/layers.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace rgnn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << ". " << name << " (" << std::fixed
              << std::setprecision(1) << secs << " s): " << o.detail << std::endl;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Small synthetic corpus with node2vec features, shared by criteria 1 and 9.
struct SmallWorld {
    ingest::Dataset dataset;
    embed::EmbeddingTable table;

    SmallWorld() {
        ingest::SynthConfig sc;
        sc.users = 200;
        sc.links_per_class = 10;
        const auto corpus = ingest::generate_synthetic(sc, 101);
        dataset = ingest::assemble_dataset(corpus.events, corpus.labels).dataset;
        embed::WalkConfig wc;
        wc.seed = 101;
        embed::SgnsConfig ec;
        ec.seed = 101;
        ec.table_size = 100000;
        table = embed::node2vec(graphs::build_global_graph(corpus.events), wc, ec).table;
    }
};

// Smallest |pre-activation| over every ReLU in the forward pass.
// Every ReLU input of the forward pass, in a fixed order.
std::vector<double> relu_inputs(const model::PreparedSample& s, const model::ModelParams& p) {
    std::vector<double> out;
    auto scan = [&](std::span<const double> v) { out.insert(out.end(), v.begin(), v.end()); };
    nn::Vector h(p.gru.hidden_dim(), 0.0);
    if (s.variant == model::Variant::rgnn) {
        for (const auto& post : s.posts) {
            nn::GcnCache c1, c2;
            const auto h1 = nn::gcn_layer(post.adj, post.features, p.gcn_w1, &c1);
            const auto h2 = nn::gcn_layer(post.adj, h1, p.gcn_w2, &c2);
            scan(c1.pre.data());
            scan(c2.pre.data());
            nn::Vector v(h2.cols(), 0.0);
            for (std::size_t i = 0; i < h2.rows(); ++i)
                for (std::size_t k = 0; k < h2.cols(); ++k) v[k] += h2(i, k);
            for (double& x : v) x /= static_cast<double>(h2.rows());
            h = nn::gru_cell(v, h, p.gru);
        }
    } else {
        for (std::size_t t = 0; t < s.sequence.rows(); ++t) h = nn::gru_cell(s.sequence.row(t), h, p.gru);
    }
    nn::MlpCache mc;
    nn::mlp_forward(h, p.mlp, &mc);
    for (std::size_t l = 0; l + 1 < mc.pre.size(); ++l) scan(mc.pre[l]);
    return out;
}

std::vector<bool> relu_pattern(std::span<const model::PreparedSample> batch, const model::ModelParams& p) {
    std::vector<bool> out;
    for (const auto& s : batch)
        for (double x : relu_inputs(s, p)) out.push_back(x > 0.0);
    return out;
}

Outcome gradient_integrity(const SmallWorld& w) {
    // full-size nets need ~6 min of finite differences; shrink widths and keep the first 16 embedding coords
    constexpr std::size_t dim = 16;
    std::vector<double> values;
    for (std::size_t r = 0; r < w.table.size(); ++r) {
        const auto row = w.table.row(r);
        values.insert(values.end(), row.begin(), row.begin() + dim);
    }
    const embed::EmbeddingTable small(w.table.users(), dim, values);
    const model::UserFeatureSource f(small);
    model::Hyperparams hp;
    hp.gcn_hidden = 12;
    hp.rnn_hidden = 12;
    hp.mlp_hidden = {12};
    constexpr double eps = 1e-5, tol = 1e-4;
    // one sample of class 0 and one of class 1
    const std::vector<ingest::LinkSample> batch{w.dataset.samples[0], w.dataset.samples[10]};
    bool ok = true;
    std::string detail;
    for (auto v : {model::Variant::rgnn, model::Variant::noreply, model::Variant::traceminer}) {
        const auto prepared = model::prepare_samples(batch, f, hp, v);
        // Kink avoidance: walk init seeds until no +-eps probe flips a ReLU. The choice
        // looks only at activation patterns, never at the gradient error.
        auto trial = hp;
        std::size_t crossings = 1;
        nn::GradCheckReport r;
        for (trial.seed = hp.seed; crossings > 0 && trial.seed < hp.seed + 50; ++trial.seed) {
            const auto p = model::init_params(v, dim, static_cast<std::size_t>(w.dataset.num_classes), trial);
            const auto base = relu_pattern(prepared, p);
            crossings = 0;
            auto closure = [&](std::span<const double> x) {
                auto q = p;
                model::unflatten(x, q);
                if (relu_pattern(prepared, q) != base) ++crossings;
                return model::loss_and_grads(prepared, q).loss;
            };
            const auto analytic = model::flatten(model::loss_and_grads(prepared, p).grads);
            r = nn::grad_check(closure, model::flatten(p), analytic, eps, tol, model::block_layout(p));
        }
        ok = ok && crossings == 0 && r.passed;
        std::string diag;
        if (!r.passed) {
            // diagnostic only: re-probe failing entries with a wider step to separate
            // a wrong derivative from difference-quotient roundoff
            const auto p = model::init_params(v, dim, static_cast<std::size_t>(w.dataset.num_classes),
                                              [&] { auto t = trial; --t.seed; return t; }());
            const auto x = model::flatten(p);
            const auto ga = model::flatten(model::loss_and_grads(prepared, p).grads);
            const double loss = model::loss_and_grads(prepared, p).loss;
            auto at = [&](std::size_t i, double h) {
                auto y = x;
                auto q = p;
                y[i] += h;
                model::unflatten(y, q);
                const double up = model::loss_and_grads(prepared, q).loss;
                y[i] -= 2 * h;
                model::unflatten(y, q);
                return (up - model::loss_and_grads(prepared, q).loss) / (2 * h);
            };
            double wide = 0.0, smallest = std::numeric_limits<double>::infinity();
            std::size_t bad = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double gn = at(i, eps);
                if (std::abs(ga[i] - gn) / std::max(1e-8, std::abs(ga[i]) + std::abs(gn)) <= tol) continue;
                ++bad;
                smallest = std::min(smallest, std::abs(ga[i]));
                const double g3 = at(i, 1e-3);
                wide = std::max(wide, std::abs(ga[i] - g3) / std::max(1e-8, std::abs(ga[i]) + std::abs(g3)));
            }
            const double resolution = std::nextafter(loss, 1e300) - loss;
            diag = " [" + std::to_string(bad) + " entries over tol, |g| >= " + fmt(smallest) +
                      ", rel err at eps 1e-3 " + fmt(wide) + ", quotient resolution ulp(L)/2eps " +
                      fmt(resolution / (2 * eps)) + "]";
        }
        detail += std::string(model::to_string(v)) + " max rel err " + fmt(r.max_rel_error) + " over " +
                  std::to_string(r.count) + " params (init seed " + std::to_string(trial.seed - 1) + ", " +
                  std::to_string(crossings) + " kink crossings)" + diag + "; ";
    }
    return {ok, detail + "tolerance 1e-4, eps 1e-5"};
}

Outcome walk_oracle() {
    Rng rng(2024);
    double worst = 0.0, worst_first = 0.0;
    std::size_t checked = 0;
    for (int g = 0; g < 100; ++g) {
        const auto dense = testing::random_dense_graph(rng, 2 + rng.index(19), rng.uniform(0.1, 0.7), 9);
        const auto graph = dense.build();
        const double p = std::exp(rng.uniform(-2.0, 2.0)), q = std::exp(rng.uniform(-2.0, 2.0));
        for (std::size_t cur = 0; cur < dense.n; ++cur) {
            if (graph.degree(cur) == 0) continue;
            const auto first = embed::first_order_probs(graph, cur);
            const auto first_want = testing::oracle_first_order(dense, cur);
            for (std::size_t k = 0; k < first.size(); ++k)
                worst_first = std::max(worst_first, std::abs(first[k] - first_want[k]));
            for (std::size_t prev = 0; prev < dense.n; ++prev) {
                if (dense.w[cur][prev] == 0) continue;
                const auto got = embed::transition_probs(graph, prev, cur, p, q);
                const auto want = testing::oracle_transition(dense, prev, cur, p, q);
                if (got.size() != want.size()) return {false, "support size mismatch"};
                double sum = 0.0;
                for (std::size_t k = 0; k < got.size(); ++k) {
                    worst = std::max(worst, std::abs(got[k] - want[k]));
                    sum += got[k];
                }
                worst = std::max(worst, std::abs(sum - 1.0));
                // p = q = 1 collapses to first order
                const auto flat = embed::transition_probs(graph, prev, cur, 1.0, 1.0);
                for (std::size_t k = 0; k < flat.size(); ++k)
                    worst_first = std::max(worst_first, std::abs(flat[k] - first_want[k]));
                ++checked;
            }
        }
    }
    const bool ok = worst <= 1e-12 && worst_first <= 1e-12;
    return {ok, std::to_string(checked) + " (prev, cur) pairs on 100 graphs; max |diff| biased " + fmt(worst) +
                    ", first-order " + fmt(worst_first) + " (limit 1e-12)"};
}

Outcome normalization_oracle() {
    // worked examples, exact
    testing::DenseGraph one(1), two(2);
    bool examples = nn::normalize_adjacency(one.build()) == nn::Matrix(1, 1, 1.0);
    two.w[0][1] = two.w[1][0] = 1;
    examples = examples && nn::normalize_adjacency(two.build()) == nn::Matrix(2, 2, 0.5);
    two.w[0][1] = two.w[1][0] = 3;
    examples = examples && nn::normalize_adjacency(two.build()) ==
                               nn::Matrix(2, 2, std::vector<double>{0.25, 0.75, 0.75, 0.25});

    Rng rng(77);
    double worst = 0.0, asym = 0.0;
    for (int g = 0; g < 200; ++g) {
        const auto dense = testing::random_dense_graph(rng, 1 + rng.index(50), rng.uniform(0.0, 0.6), 7);
        const auto got = nn::normalize_adjacency(dense.build());
        const auto want = testing::oracle_normalized(dense);
        for (std::size_t i = 0; i < dense.n; ++i)
            for (std::size_t j = 0; j < dense.n; ++j) {
                worst = std::max(worst, std::abs(got(i, j) - want[i][j]));
                asym = std::max(asym, std::abs(got(i, j) - got(j, i)));
            }
    }
    return {examples && worst <= 1e-12 && asym <= 1e-12,
            std::string("worked examples ") + (examples ? "exact" : "WRONG") + "; 200 graphs (1-50 nodes) max |diff| " +
                fmt(worst) + ", max asymmetry " + fmt(asym)};
}

Outcome gcn_symmetry() {
    Rng rng(31);
    const std::size_t users = 60;
    const auto table = testing::random_table(rng, users, 16);
    const model::UserFeatureSource f(table);
    model::Hyperparams hp;
    hp.gcn_hidden = 12;
    const auto params = model::init_params(model::Variant::rgnn, 16, 3, hp);
    double worst = 0.0;
    for (int g = 0; g < 50; ++g) {
        const auto post = testing::random_link(rng, users, 0, 1, 40).posts[0];
        const auto& rg = post.reply_graph;
        std::vector<std::size_t> perm(rg.num_nodes());
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(std::span(perm));
        graphs::GraphBuilder b;
        for (std::size_t i : perm) b.add_node(rg.user(i));
        for (const auto& e : rg.edges()) b.add_interaction(rg.user(e.a), rg.user(e.b), e.weight);
        auto relabeled = post;
        relabeled.reply_graph = b.build();
        const auto a = model::encode_post(post, f, params, hp);
        const auto c = model::encode_post(relabeled, f, params, hp);
        for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - c[k]));
    }
    return {worst <= 1e-12, "50 random reply graphs relabeled; max |diff| " + fmt(worst) + " (limit 1e-12)"};
}

Outcome metric_identity() {
    Rng rng(5);
    int mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        const int c = 2 + static_cast<int>(rng.index(7));
        const std::size_t n = 1 + rng.index(200);
        std::vector<int> pred(n), gold(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = static_cast<int>(rng.index(static_cast<std::uint64_t>(c)));
            gold[i] = rng.bernoulli(0.5) ? pred[i] : static_cast<int>(rng.index(static_cast<std::uint64_t>(c)));
        }
        const auto m = bench::compute_metrics(pred, gold, c);
        if (m.micro_f1 != m.accuracy) ++mismatches;
    }
    const std::vector<int> pred{0, 0, 0, 0}, gold{0, 1, 0, 1};
    const double macro = bench::compute_metrics(pred, gold, 2).macro_f1;
    const bool macro_ok = std::abs(macro - 1.0 / 3.0) < 1e-15;
    return {mismatches == 0 && macro_ok, std::to_string(mismatches) + " of 1000 sets with micro-F1 != accuracy; " +
                                             "all-zero prediction macro-F1 = " + fmt(macro) + " (want 1/3)"};
}

app::PipelineConfig planted_config(ingest::SignalMode mode, const fs::path& out) {
    app::PipelineConfig cfg;  // C = 4, K = 4, 125 links per class
    cfg.synth.mode = mode;
    cfg.set_seed(7);
    cfg.out_dir = out;
    return cfg;
}

std::map<std::string, double> accuracies(const app::PipelineResult& r) {
    std::map<std::string, double> out;
    for (const auto& e : r.results) out[app::to_string(e.model.kind)] = e.test.accuracy;
    return out;
}

std::string list(const std::map<std::string, double>& acc) {
    std::string s;
    for (const auto& [k, v] : acc) s += (s.empty() ? "" : ", ") + k + " " + fmt(v);
    return s;
}

Outcome planted_order(const fs::path& out) {
    const auto cfg = planted_config(ingest::SignalMode::order, out);
    std::ostringstream log;
    const auto t0 = std::chrono::steady_clock::now();
    const auto acc = accuracies(app::run_pipeline(cfg, log));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = secs < 600.0;
    for (const char* b : {"svm-author", "svm-author-commenter", "logit-author", "logit-author-commenter"})
        ok = ok && std::abs(acc.at(b) - 0.25) <= 0.10;
    ok = ok && acc.at("rgnn") >= 0.80 && acc.at("noreply") >= 0.80;
    return {ok, "test accuracy: " + list(acc) + " (baselines need 0.25 +/- 0.10, rgnn/noreply >= 0.80; pipeline " +
                    fmt(secs) + " s)"};
}

Outcome planted_mixture(const fs::path& out) {
    const auto cfg = planted_config(ingest::SignalMode::mixture, out);
    std::ostringstream log;
    const auto acc = accuracies(app::run_pipeline(cfg, log));
    bool ok = acc.size() == 7;
    for (const auto& [k, v] : acc) ok = ok && v > 0.60;
    return {ok, "test accuracy: " + list(acc) + " (all need > 0.60)"};
}

Outcome determinism(const fs::path& first, const fs::path& second) {
    const auto cfg = planted_config(ingest::SignalMode::order, second);
    std::ostringstream log;
    app::run_pipeline(cfg, log);
    std::size_t compared = 0;
    std::vector<std::string> differing;
    for (const auto& entry : fs::directory_iterator(first / "metrics")) {
        const auto name = entry.path().filename();
        ++compared;
        if (!fs::exists(second / "metrics" / name) || slurp(entry.path()) != slurp(second / "metrics" / name))
            differing.push_back(name.string());
    }
    const bool ok = compared == 7 && differing.empty();
    std::string detail = std::to_string(compared) + " metrics files compared across two seed-7 runs; ";
    detail += differing.empty() ? "all byte-identical" : std::to_string(differing.size()) + " differ";
    return {ok, detail};
}

Outcome smoke_training(const SmallWorld& w) {
    const model::UserFeatureSource f(w.table);
    // 10 fixed samples, mixed classes
    std::vector<ingest::LinkSample> data;
    for (std::size_t i = 0; i < w.dataset.samples.size() && data.size() < 10; i += 4) data.push_back(w.dataset.samples[i]);
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), 0);
    const int classes = w.dataset.num_classes;

    bool ok = true;
    std::string detail;
    auto check = [&](const std::string& name, const std::vector<double>& loss) {
        bool dec = loss.size() == 5;
        for (std::size_t e = 1; e < loss.size(); ++e) dec = dec && loss[e] < loss[e - 1];
        ok = ok && dec;
        detail += name + (dec ? " " : " NOT ") + fmt(loss.front()) + "->" + fmt(loss.back()) + "; ";
    };
    model::Hyperparams hp;
    hp.lr = 1e-2;
    hp.epochs = 5;
    hp.batch_size = static_cast<int>(data.size());
    for (auto v : {model::Variant::rgnn, model::Variant::noreply, model::Variant::traceminer}) {
        const auto prepared = model::prepare_samples(data, f, hp, v);
        const auto init = model::init_params(v, w.table.dim(), static_cast<std::size_t>(classes), hp);
        check(model::to_string(v), bench::train_prepared(prepared, {}, init, hp).history.train_loss);
    }
    std::vector<int> labels;
    for (const auto& s : data) labels.push_back(s.label);
    for (auto kind : {app::ModelKind::svm_author, app::ModelKind::svm_author_commenter, app::ModelKind::logit_author,
                      app::ModelKind::logit_author_commenter}) {
        bench::LinearConfig cfg;
        cfg.loss = app::linear_loss(kind);
        cfg.epochs = 5;
        cfg.lr = 1e-2;
        cfg.batch_size = 0;
        const auto x = bench::mean_embedding_matrix(data, f, app::feature_mode(kind));
        check(app::to_string(kind), bench::train_linear(x, labels, classes, cfg).epoch_loss);
    }
    return {ok, detail + "10 samples, lr 1e-2, full batch"};
}

}  // namespace

int main() {
    const auto work = fs::temp_directory_path() / "rgnn_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    std::cout << "acceptance suite\n";
    const SmallWorld world;
    report(1, "gradient integrity", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        auto o = gradient_integrity(world);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.pass = o.pass && secs < 60.0;
        o.detail += "; " + fmt(secs) + " s (limit 60 s)";
        return o;
    });
    report(2, "walk oracle", walk_oracle);
    report(3, "normalization oracle", normalization_oracle);
    report(4, "GCN relabeling symmetry", gcn_symmetry);
    report(5, "metric identity", metric_identity);
    report(6, "planted-order separation", [&] { return planted_order(work / "order_a"); });
    report(7, "planted-mixture sanity", [&] { return planted_mixture(work / "mixture"); });
    report(8, "determinism", [&] { return determinism(work / "order_a", work / "order_b"); });
    report(9, "smoke training", [&] { return smoke_training(world); });

    std::cout << (failures == 0 ? "all 9 criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    fs::remove_all(work);
    return failures;
}
