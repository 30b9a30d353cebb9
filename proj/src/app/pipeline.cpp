#include <rgnn/app/pipeline.hpp>

#include <rgnn/app/config.hpp>
#include <rgnn/bench/metrics.hpp>
#include <rgnn/graphs/graph.hpp>

#include <ostream>

namespace rgnn::app {

void PipelineConfig::set_seed(std::uint64_t seed) {
    synth_seed = seed;
    walk.seed = seed;
    sgns.seed = seed;
    train.hp.seed = seed;
    train.linear.seed = seed;
    train.split_seed = seed;
}

std::vector<ExperimentResult> run_experiment(const ingest::Dataset& dataset,
                                             const embed::EmbeddingTable& embeddings,
                                             const std::vector<ModelKind>& kinds,
                                             const TrainSettings& settings, std::ostream* log) {
    const auto split = bench::split_dataset(dataset, settings.ratios, settings.split_seed);
    const model::UserFeatureSource features(embeddings);
    std::vector<ExperimentResult> out;
    for (ModelKind kind : kinds) {
        ExperimentResult r;
        r.model = train_model(kind, dataset, split, features, settings);
        r.test = evaluate(r.model, dataset, split.test, features);
        if (log)
            *log << to_string(kind) << ": test accuracy " << r.test.accuracy << ", macro-F1 "
                 << r.test.macro_f1 << " (selected epoch " << r.model.selected_epoch << ")\n";
        out.push_back(std::move(r));
    }
    return out;
}

PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream& log) {
    namespace fs = std::filesystem;
    const fs::path& dir = cfg.out_dir;
    auto corpus = ingest::generate_synthetic(cfg.synth, cfg.synth_seed);
    write_file(dir / "events.jsonl", [&](std::ostream& o) { ingest::write_events(o, corpus.events); });
    write_file(dir / "labels.tsv", [&](std::ostream& o) { ingest::write_labels(o, corpus.labels); });
    log << "synth: " << corpus.events.posts().size() << " posts, " << corpus.events.comments().size()
        << " comments, " << corpus.labels.size() << " labeled links\n";

    const auto events = load_events(dir / "events.jsonl");
    const auto labels = load_labels(dir / "labels.tsv");

    const auto graph = graphs::build_global_graph(events);
    write_file(dir / "graph.tsv", [&](std::ostream& o) { graphs::write_edge_list(o, graph); });
    log << "build-graph: " << graph.num_nodes() << " users, " << graph.num_edges() << " edges\n";

    const auto embedded = embed::node2vec(load_graph(dir / "graph.tsv"), cfg.walk, cfg.sgns);
    write_file(dir / "embeddings.txt", [&](std::ostream& o) { embed::write_embeddings(o, embedded.table); });
    log << "embed: " << embedded.table.size() << " x " << embedded.table.dim() << ", final SGNS loss "
        << (embedded.epoch_loss.empty() ? 0.0 : embedded.epoch_loss.back()) << '\n';

    const auto embeddings = load_embeddings(dir / "embeddings.txt");
    auto assembled = ingest::assemble_dataset(events, labels);
    const auto& dataset = assembled.dataset;

    PipelineResult result;
    result.results = run_experiment(dataset, embeddings, cfg.kinds, cfg.train, &log);
    for (auto& r : result.results) {
        r.model.embeddings = "embeddings.txt";
        const std::string name = to_string(r.model.kind);
        save_model(dir / "models" / (name + ".ckpt"), r.model);
        write_file(dir / "models" / (name + ".history.json"),
                   [&](std::ostream& o) { o << history_json(r.model).dump(2) << '\n'; });
        write_file(dir / "metrics" / (name + ".json"),
                   [&](std::ostream& o) { o << metrics_report(r.test, r.model).dump(2) << '\n'; });
    }
    return result;
}

}  // namespace rgnn::app
