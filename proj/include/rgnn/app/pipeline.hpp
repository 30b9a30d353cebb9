#pragma once

#include <rgnn/app/model_io.hpp>
#include <rgnn/embed/sgns.hpp>
#include <rgnn/ingest/synth.hpp>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace rgnn::app {

struct ExperimentResult {
    TrainedModel model;
    bench::Metrics test;
};

/// Splits `dataset`, trains each kind on the same split, and scores it on
/// the test part.
std::vector<ExperimentResult> run_experiment(const ingest::Dataset& dataset,
                                             const embed::EmbeddingTable& embeddings,
                                             const std::vector<ModelKind>& kinds,
                                             const TrainSettings& settings, std::ostream* log = nullptr);

struct PipelineConfig {
    ingest::SynthConfig synth;
    std::uint64_t synth_seed = 1;
    embed::WalkConfig walk;
    embed::SgnsConfig sgns;
    TrainSettings train;
    std::vector<ModelKind> kinds = all_model_kinds();
    std::filesystem::path out_dir;

    /// Sets every stage's seed from one value.
    void set_seed(std::uint64_t seed);
};

struct PipelineResult {
    std::vector<ExperimentResult> results;
};

/// synth -> build-graph -> embed -> train -> evaluate, each stage writing
/// its file under out_dir:
///   events.jsonl, labels.tsv, graph.tsv, embeddings.txt,
///   models/<variant>.ckpt, models/<variant>.history.json,
///   metrics/<variant>.json
PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream& log);

}  // namespace rgnn::app
