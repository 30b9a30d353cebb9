#pragma once

#include <rgnn/bench/split.hpp>
#include <rgnn/model/model.hpp>

#include <span>
#include <vector>

namespace rgnn::bench {

struct TrainHistory {
    std::vector<double> train_loss;    ///< mean minibatch loss per epoch
    std::vector<double> val_micro_f1;  ///< after each epoch
    int selected_epoch = 0;            ///< argmax val_micro_f1, earliest on ties
};

struct TrainResult {
    model::ModelParams params;
    TrainHistory history;
};

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adam with bias correction over a flat parameter vector.
class Adam {
public:
    Adam(std::size_t size, double lr, AdamConfig cfg = {});
    void step(std::span<double> params, std::span<const double> grads);

private:
    double lr_;
    AdamConfig cfg_;
    std::vector<double> m_, v_;
    long long t_ = 0;
};

/// Minibatch Adam on prepared samples. Each epoch shuffles `train` with a
/// stream derived from (hp.seed, epoch). If `validation` is nonempty the
/// returned params are those of the best validation epoch; otherwise the
/// final ones. Throws DivergenceError on a non-finite loss.
TrainResult train_prepared(std::span<const model::PreparedSample> train,
                           std::span<const model::PreparedSample> validation,
                           model::ModelParams init, const model::Hyperparams& hp);

/// Prepares the split's train/validation samples and trains from init_params.
TrainResult train(const ingest::Dataset& dataset, const Split& split, model::Variant variant,
                  const model::Hyperparams& hp, const model::UserFeatureSource& features);

/// Predicted classes for prepared samples.
std::vector<int> predict_all(std::span<const model::PreparedSample> samples, const model::ModelParams& params);

template <class T>
std::vector<T> gather(std::span<const T> items, std::span<const std::size_t> indices) {
    std::vector<T> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(items[i]);
    return out;
}

}  // namespace rgnn::bench
