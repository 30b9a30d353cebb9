#include <rgnn/bench/train.hpp>

#include <rgnn/bench/metrics.hpp>
#include <rgnn/core/error.hpp>
#include <rgnn/core/rng.hpp>

#include <cmath>
#include <numeric>

namespace rgnn::bench {

namespace {

constexpr std::uint64_t kShuffleStream = 0x53485546;

}  // namespace

Adam::Adam(std::size_t size, double lr, AdamConfig cfg)
    : lr_(lr), cfg_(cfg), m_(size, 0.0), v_(size, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
        throw DimensionError("Adam::step: size mismatch");
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grads[i];
        v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grads[i] * grads[i];
        params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.eps);
    }
}

std::vector<int> predict_all(std::span<const model::PreparedSample> samples, const model::ModelParams& params) {
    const auto logits = model::forward_all(samples, params);
    std::vector<int> out;
    out.reserve(logits.size());
    for (const auto& l : logits) out.push_back(model::predict(l));
    return out;
}

TrainResult train_prepared(std::span<const model::PreparedSample> train,
                           std::span<const model::PreparedSample> validation,
                           model::ModelParams init, const model::Hyperparams& hp) {
    hp.validate();
    TrainResult result;
    result.params = std::move(init);
    if (hp.epochs == 0) return result;
    if (train.empty()) throw Error("train: empty training set");

    const int num_classes = static_cast<int>(result.params.num_classes());
    std::vector<int> val_labels;
    for (const auto& s : validation) val_labels.push_back(s.label);

    std::vector<double> flat = model::flatten(result.params);
    Adam adam(flat.size(), hp.lr);
    model::ModelParams current = result.params;
    model::ModelParams best = current;
    double best_f1 = -1.0;

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    const auto batch_size = static_cast<std::size_t>(hp.batch_size);

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        Rng rng(derive_seed({hp.seed, kShuffleStream, static_cast<std::uint64_t>(epoch)}));
        rng.shuffle(std::span<std::size_t>(order));
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + batch_size);
            const std::span<const std::size_t> batch(order.data() + start, end - start);
            auto lg = model::loss_and_grads(train, batch, current);
            if (!std::isfinite(lg.loss)) throw DivergenceError(epoch, "training loss is not finite");
            loss_sum += lg.loss;
            ++batches;
            const auto g = model::flatten(lg.grads);
            adam.step(flat, g);
            model::unflatten(flat, current);
        }
        result.history.train_loss.push_back(loss_sum / static_cast<double>(batches));

        if (!validation.empty()) {
            const auto pred = predict_all(validation, current);
            const double f1 = compute_metrics(pred, val_labels, num_classes).micro_f1;
            result.history.val_micro_f1.push_back(f1);
            if (f1 > best_f1) {
                best_f1 = f1;
                best = current;
                result.history.selected_epoch = epoch;
            }
        }
    }
    if (!validation.empty()) {
        result.params = std::move(best);
    } else {
        result.params = std::move(current);
        result.history.selected_epoch = hp.epochs - 1;
    }
    return result;
}

TrainResult train(const ingest::Dataset& dataset, const Split& split, model::Variant variant,
                  const model::Hyperparams& hp, const model::UserFeatureSource& features) {
    const std::span<const ingest::LinkSample> all(dataset.samples);
    const auto train_samples = gather(all, split.train);
    const auto val_samples = gather(all, split.validation);
    const auto train_prep = model::prepare_samples(train_samples, features, hp, variant);
    const auto val_prep = model::prepare_samples(val_samples, features, hp, variant);
    auto init = model::init_params(variant, features.dim(), static_cast<std::size_t>(dataset.num_classes), hp);
    return train_prepared(train_prep, val_prep, std::move(init), hp);
}

}  // namespace rgnn::bench
