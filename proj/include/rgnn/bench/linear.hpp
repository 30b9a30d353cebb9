#pragma once

#include <rgnn/embed/embedding_table.hpp>
#include <rgnn/ingest/dataset.hpp>
#include <rgnn/nn/matrix.hpp>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rgnn::model {
class UserFeatureSource;
}

namespace rgnn::bench {

enum class FeatureMode {
    author,            ///< mean over post authors
    author_commenter,  ///< mean over post authors and all commenters
};

/// Arithmetic mean of the selected user multiset's embeddings (unknown
/// users contribute zero vectors). Every sample has at least one author.
nn::Vector mean_embedding_features(const ingest::LinkSample& sample,
                                   const model::UserFeatureSource& features, FeatureMode mode);

/// One row per sample.
nn::Matrix mean_embedding_matrix(std::span<const ingest::LinkSample> samples,
                                 const model::UserFeatureSource& features, FeatureMode mode);

enum class LinearLoss {
    logistic,  ///< one-vs-rest logistic regression
    hinge,     ///< one-vs-rest linear SVM
};

struct LinearConfig {
    LinearLoss loss = LinearLoss::hinge;
    int epochs = 100;
    double lr = 0.05;
    double l2 = 1e-4;
    /// 0 = full batch.
    std::size_t batch_size = 16;
    std::uint64_t seed = 1;
};

/// One weight row and bias per class.
struct LinearModel {
    nn::Matrix weights;  ///< C x d
    nn::Vector bias;     ///< C

    nn::Vector scores(std::span<const double> x) const;
    /// argmax score, ties to the smallest index.
    int predict(std::span<const double> x) const;
};

struct LinearFit {
    LinearModel model;
    /// Regularized objective at the start of each epoch (over the training set).
    std::vector<double> epoch_loss;
    /// Validation micro-F1 after each epoch (empty without a validation set).
    std::vector<double> val_micro_f1;
    /// Epoch whose weights were kept (argmax validation micro-F1, earliest on
    /// ties); the last epoch when there is no validation set.
    int selected_epoch = 0;
};

/// Minibatch SGD on the mean one-vs-rest loss, with L2 on weights applied as
/// a proximal shrink w <- w / (1 + lr * l2) so any l2 is stable. Biases are
/// not regularized. Deterministic given cfg.seed.
LinearFit train_linear(const nn::Matrix& features, std::span<const int> labels, int num_classes,
                       const LinearConfig& cfg, const nn::Matrix* val_features = nullptr,
                       std::span<const int> val_labels = {});

/// Objective value on a data set (mean OvR loss + l2/2 * ||W||^2).
double linear_objective(const LinearModel& model, const nn::Matrix& features,
                        std::span<const int> labels, const LinearConfig& cfg);

}  // namespace rgnn::bench
