#pragma once

#include <rgnn/bench/linear.hpp>
#include <rgnn/bench/metrics.hpp>
#include <rgnn/bench/split.hpp>
#include <rgnn/model/model.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rgnn::app {

/// Every trainable model the tool knows: the three recurrent variants and
/// four linear baselines on mean user embeddings.
enum class ModelKind {
    rgnn,
    noreply,
    traceminer,
    svm_author,
    svm_author_commenter,
    logit_author,
    logit_author_commenter,
};

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);
const std::vector<ModelKind>& all_model_kinds();

bool is_neural(ModelKind kind);
model::Variant neural_variant(ModelKind kind);
bench::FeatureMode feature_mode(ModelKind kind);
bench::LinearLoss linear_loss(ModelKind kind);

struct TrainSettings {
    model::Hyperparams hp;
    bench::LinearConfig linear;
    bench::SplitRatios ratios;
    std::uint64_t split_seed = 1;
};

struct TrainedModel {
    ModelKind kind = ModelKind::rgnn;
    int num_classes = 0;
    std::size_t embed_dim = 0;
    TrainSettings settings;
    /// File the model was trained against (informational).
    std::string embeddings;

    model::ModelParams neural;   ///< neural kinds
    bench::LinearModel linear;   ///< baseline kinds

    std::vector<double> train_loss;
    std::vector<double> val_micro_f1;
    int selected_epoch = 0;

    /// Hash of everything that determines training (kind, settings, C, d).
    std::string config_hash() const;
};

TrainedModel train_model(ModelKind kind, const ingest::Dataset& dataset, const bench::Split& split,
                         const model::UserFeatureSource& features, const TrainSettings& settings);

std::vector<int> predict(const TrainedModel& model, std::span<const ingest::LinkSample> samples,
                         const model::UserFeatureSource& features);

/// Metrics on dataset[indices]. Throws DimensionError if the feature
/// dimension differs from the one the model was trained with.
bench::Metrics evaluate(const TrainedModel& model, const ingest::Dataset& dataset,
                        std::span<const std::size_t> indices, const model::UserFeatureSource& features);

/// Parameter container plus a manifest of kind, settings, C, d, and the
/// embedding file.
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

nlohmann::ordered_json history_json(const TrainedModel& model);

/// Metrics plus run metadata (variant, seed, config hash). No timestamps
/// or paths, so identical runs produce identical files.
nlohmann::ordered_json metrics_report(const bench::Metrics& metrics, const TrainedModel& model);

}  // namespace rgnn::app
