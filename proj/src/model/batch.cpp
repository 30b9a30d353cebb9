#include <rgnn/model/model.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/core/parallel.hpp>

namespace rgnn::model {

namespace {

LossAndGrads reduce(std::vector<double>& losses, std::vector<ModelParams>& per_sample,
                    const ModelParams& params) {
    LossAndGrads out;
    out.grads = params.zeros_like();
    double total = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        total += losses[i];
        out.grads += per_sample[i];
    }
    const double inv = 1.0 / static_cast<double>(losses.size());
    out.loss = total * inv;
    out.grads *= inv;
    return out;
}

}  // namespace

LossAndGrads loss_and_grads(std::span<const PreparedSample> samples, std::span<const std::size_t> indices,
                            const ModelParams& params) {
    if (indices.empty()) throw Error("loss_and_grads: empty batch");
    std::vector<double> losses(indices.size());
    std::vector<ModelParams> per_sample(indices.size());
    parallel_for(indices.size(), [&](std::size_t i) {
        per_sample[i] = params.zeros_like();
        losses[i] = sample_loss_and_grads(samples[indices[i]], params, per_sample[i]);
    });
    return reduce(losses, per_sample, params);
}

LossAndGrads loss_and_grads(std::span<const PreparedSample> batch, const ModelParams& params) {
    std::vector<std::size_t> all(batch.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return loss_and_grads(batch, all, params);
}

LossAndGrads loss_and_grads_serial(std::span<const PreparedSample> batch, const ModelParams& params) {
    if (batch.empty()) throw Error("loss_and_grads: empty batch");
    std::vector<double> losses(batch.size());
    std::vector<ModelParams> per_sample(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        per_sample[i] = params.zeros_like();
        losses[i] = sample_loss_and_grads(batch[i], params, per_sample[i]);
    }
    return reduce(losses, per_sample, params);
}

std::pair<double, std::vector<double>> loss_and_grads(std::span<const LinkSample> batch,
                                                      const UserFeatureSource& features,
                                                      const ModelParams& params,
                                                      const Hyperparams& hp) {
    const auto prepared = prepare_samples(batch, features, hp, params.variant);
    auto result = loss_and_grads(std::span<const PreparedSample>(prepared), params);
    return {result.loss, flatten(result.grads)};
}

std::vector<nn::Vector> forward_all(std::span<const PreparedSample> samples, const ModelParams& params) {
    std::vector<nn::Vector> out(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { out[i] = forward(samples[i], params); });
    return out;
}

}  // namespace rgnn::model
