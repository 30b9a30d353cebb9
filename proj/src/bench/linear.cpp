#include <rgnn/bench/linear.hpp>

#include <rgnn/bench/metrics.hpp>
#include <rgnn/core/error.hpp>
#include <rgnn/core/rng.hpp>
#include <rgnn/model/model.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rgnn::bench {

namespace {

constexpr std::uint64_t kLinearStream = 0x4c494e;

// Loss and d(loss)/d(score) for one class's binary problem.
std::pair<double, double> ovr_loss(LinearLoss loss, double score, bool positive) {
    if (loss == LinearLoss::logistic) {
        const double y = positive ? 1.0 : 0.0;
        const double l = score >= 0 ? std::log1p(std::exp(-score)) + (1.0 - y) * score
                                    : std::log1p(std::exp(score)) - y * score;
        const double p = score >= 0 ? 1.0 / (1.0 + std::exp(-score)) : std::exp(score) / (1.0 + std::exp(score));
        return {l, p - y};
    }
    const double y = positive ? 1.0 : -1.0;
    const double margin = 1.0 - y * score;
    if (margin > 0.0) return {margin, -y};
    return {0.0, 0.0};
}

}  // namespace

nn::Vector mean_embedding_features(const ingest::LinkSample& sample,
                                   const model::UserFeatureSource& features, FeatureMode mode) {
    nn::Vector mean(features.dim(), 0.0);
    std::size_t count = 0;
    auto add = [&](const ingest::UserId& u) {
        auto v = features.lookup(u);
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
        ++count;
    };
    for (const auto& post : sample.posts) {
        add(post.author);
        if (mode == FeatureMode::author_commenter)
            for (const auto& c : post.commenters) add(c);
    }
    if (count == 0) throw Error("link " + sample.link_id + " has no posts");
    for (double& x : mean) x /= static_cast<double>(count);
    return mean;
}

nn::Matrix mean_embedding_matrix(std::span<const ingest::LinkSample> samples,
                                 const model::UserFeatureSource& features, FeatureMode mode) {
    nn::Matrix m(samples.size(), features.dim());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto v = mean_embedding_features(samples[i], features, mode);
        std::copy(v.begin(), v.end(), m.row(i).begin());
    }
    return m;
}

nn::Vector LinearModel::scores(std::span<const double> x) const {
    nn::Vector s = bias;
    nn::matvec_acc(weights, x, s);
    return s;
}

int LinearModel::predict(std::span<const double> x) const {
    const auto s = scores(x);
    return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

double linear_objective(const LinearModel& model, const nn::Matrix& features,
                        std::span<const int> labels, const LinearConfig& cfg) {
    double total = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const auto s = model.scores(features.row(i));
        for (std::size_t c = 0; c < s.size(); ++c)
            total += ovr_loss(cfg.loss, s[c], static_cast<int>(c) == labels[i]).first;
    }
    double sq = 0.0;
    for (double w : model.weights.data()) sq += w * w;
    return total / static_cast<double>(features.rows()) + 0.5 * cfg.l2 * sq;
}

LinearFit train_linear(const nn::Matrix& features, std::span<const int> labels, int num_classes,
                       const LinearConfig& cfg, const nn::Matrix* val_features,
                       std::span<const int> val_labels) {
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    const auto k = static_cast<std::size_t>(num_classes);
    if (labels.size() != n) throw DimensionError("train_linear: labels vs feature rows");
    if (n == 0) throw Error("train_linear: no training samples");
    if (num_classes < 2) throw ConfigError("train_linear: need at least 2 classes");
    if (cfg.epochs < 0 || !(cfg.lr > 0.0) || cfg.l2 < 0.0) throw ConfigError("train_linear: invalid config");
    if (val_features && val_features->rows() != val_labels.size())
        throw DimensionError("train_linear: validation labels vs rows");

    LinearFit fit;
    fit.model.weights = nn::Matrix(k, d);
    fit.model.bias.assign(k, 0.0);
    LinearModel best = fit.model;
    double best_f1 = -1.0;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const std::size_t batch = cfg.batch_size == 0 ? n : std::min(cfg.batch_size, n);
    const double shrink = 1.0 / (1.0 + cfg.lr * cfg.l2);

    nn::Matrix gw(k, d);
    nn::Vector gb(k);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        fit.epoch_loss.push_back(linear_objective(fit.model, features, labels, cfg));
        if (cfg.batch_size != 0) {
            Rng rng(derive_seed({cfg.seed, kLinearStream, static_cast<std::uint64_t>(epoch)}));
            rng.shuffle(std::span<std::size_t>(order));
        }
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(n, start + batch);
            gw.fill(0.0);
            std::fill(gb.begin(), gb.end(), 0.0);
            for (std::size_t b = start; b < end; ++b) {
                const std::size_t i = order[b];
                const auto x = features.row(i);
                const auto s = fit.model.scores(x);
                for (std::size_t c = 0; c < k; ++c) {
                    const double g = ovr_loss(cfg.loss, s[c], static_cast<int>(c) == labels[i]).second;
                    if (g == 0.0) continue;
                    auto row = gw.row(c);
                    for (std::size_t j = 0; j < d; ++j) row[j] += g * x[j];
                    gb[c] += g;
                }
            }
            const double step = cfg.lr / static_cast<double>(end - start);
            auto w = fit.model.weights.data();
            auto g = gw.data();
            for (std::size_t j = 0; j < w.size(); ++j) w[j] = (w[j] - step * g[j]) * shrink;
            for (std::size_t c = 0; c < k; ++c) fit.model.bias[c] -= step * gb[c];
        }

        if (val_features) {
            std::vector<int> pred(val_features->rows());
            for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = fit.model.predict(val_features->row(i));
            const double f1 = compute_metrics(pred, val_labels, num_classes).micro_f1;
            fit.val_micro_f1.push_back(f1);
            if (f1 > best_f1) {
                best_f1 = f1;
                best = fit.model;
                fit.selected_epoch = epoch;
            }
        }
    }
    if (val_features && cfg.epochs > 0) fit.model = std::move(best);
    else fit.selected_epoch = std::max(0, cfg.epochs - 1);
    return fit;
}

}  // namespace rgnn::bench
