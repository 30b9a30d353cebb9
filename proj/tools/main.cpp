// rgnn: forum link classification from user-interaction signals.
//
//   rgnn synth        generate a synthetic cascade corpus
//   rgnn build-graph  derive the user-user interaction graph
//   rgnn embed        node2vec user embeddings
//   rgnn train        train one model variant
//   rgnn evaluate     score a checkpoint on the test split
//   rgnn pipeline     all of the above with one seed
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <rgnn/app/config.hpp>
#include <rgnn/app/model_io.hpp>
#include <rgnn/app/pipeline.hpp>
#include <rgnn/bench/metrics.hpp>
#include <rgnn/core/error.hpp>
#include <rgnn/embed/sgns.hpp>
#include <rgnn/graphs/graph.hpp>
#include <rgnn/ingest/dataset.hpp>
#include <rgnn/ingest/synth.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace rgnn;

namespace {

struct SynthFlags {
    ingest::SynthConfig cfg;
    std::string mode = "order";
};

void add_synth_flags(CLI::App* cmd, SynthFlags& f) {
    auto& c = f.cfg;
    cmd->add_option("--users", c.users, "Number of users")->capture_default_str();
    cmd->add_option("--communities", c.communities, "Number of communities K")->capture_default_str();
    cmd->add_option("--classes", c.classes, "Number of classes C")->capture_default_str();
    cmd->add_option("--links-per-class", c.links_per_class, "Labeled links per class")->capture_default_str();
    cmd->add_option("--posts-min", c.posts_min, "Minimum posts per link")->capture_default_str();
    cmd->add_option("--posts-max", c.posts_max, "Maximum posts per link")->capture_default_str();
    cmd->add_option("--comments-min", c.comments_min, "Minimum comments per post")->capture_default_str();
    cmd->add_option("--comments-max", c.comments_max, "Maximum comments per post")->capture_default_str();
    cmd->add_option("--mode", f.mode, "Planted signal: order | mixture")
        ->check(CLI::IsMember({"order", "mixture"}))
        ->capture_default_str();
    cmd->add_option("--intra-prob", c.intra_prob, "Probability a reply stays in the parent's community")
        ->capture_default_str();
    cmd->add_option("--nested-reply-prob", c.nested_reply_prob,
                    "Probability a comment replies to an earlier comment")
        ->capture_default_str();
    cmd->add_option("--mixture-dominance", c.mixture_dominance,
                    "mixture mode: share of posts from the class's dominant community")
        ->capture_default_str();
}

void add_walk_flags(CLI::App* cmd, embed::WalkConfig& w, embed::SgnsConfig& s) {
    cmd->add_option("--walks-per-node", w.walks_per_node, "node2vec walks per node r")->capture_default_str();
    cmd->add_option("--walk-length", w.walk_length, "node2vec walk length l")->capture_default_str();
    cmd->add_option("--p", w.p, "node2vec return parameter p")->capture_default_str();
    cmd->add_option("--q", w.q, "node2vec in-out parameter q")->capture_default_str();
    cmd->add_option("--dim", s.dim, "Embedding dimension d")->capture_default_str();
    cmd->add_option("--window", s.window, "Skip-gram window")->capture_default_str();
    cmd->add_option("--negatives", s.negatives, "Negative samples per positive pair")->capture_default_str();
    cmd->add_option("--sgns-epochs", s.epochs, "Skip-gram epochs")->capture_default_str();
    cmd->add_option("--sgns-lr", s.lr, "Initial skip-gram learning rate")->capture_default_str();
    cmd->add_option("--sgns-lr-floor", s.lr_floor, "Final skip-gram learning rate")->capture_default_str();
}

void add_train_flags(CLI::App* cmd, app::TrainSettings& t) {
    auto& hp = t.hp;
    cmd->add_option("--gcn-hidden", hp.gcn_hidden, "GCN hidden width h")->capture_default_str();
    cmd->add_option("--rnn-hidden", hp.rnn_hidden, "GRU hidden width s")->capture_default_str();
    cmd->add_option("--mlp-hidden", hp.mlp_hidden, "MLP hidden widths (repeatable; empty = linear head)")
        ->capture_default_str()
        ->expected(0, -1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    cmd->add_option("--max-posts", hp.max_posts, "Keep the earliest T_max posts per link")->capture_default_str();
    cmd->add_option("--max-commenters", hp.max_commenters, "Keep the earliest N_max commenters per post")
        ->capture_default_str();
    cmd->add_option("--lr", hp.lr, "Adam learning rate")->capture_default_str();
    cmd->add_option("--batch-size", hp.batch_size, "Minibatch size")->capture_default_str();
    cmd->add_option("--epochs", hp.epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--linear-epochs", t.linear.epochs, "Baseline SGD epochs")->capture_default_str();
    cmd->add_option("--linear-lr", t.linear.lr, "Baseline SGD learning rate")->capture_default_str();
    cmd->add_option("--linear-l2", t.linear.l2, "Baseline L2 strength")->capture_default_str();
    cmd->add_option("--linear-batch-size", t.linear.batch_size, "Baseline minibatch size (0 = full batch)")
        ->capture_default_str();
    cmd->add_option("--train-ratio", t.ratios.train, "Train share")->capture_default_str();
    cmd->add_option("--val-ratio", t.ratios.validation, "Validation share")->capture_default_str();
    cmd->add_option("--test-ratio", t.ratios.test, "Test share")->capture_default_str();
}

// `--config FILE` holds `key=value` lines naming long flags without dashes.
// They are spliced in right after the subcommand so explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] != "--config") continue;
        if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file name");
        const std::string path = args[i + 1];
        std::ifstream in(path);
        if (!in) throw app::IoError("cannot open config " + path);
        std::vector<std::string> spliced;
        std::string line;
        while (std::getline(in, line)) {
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw CLI::ConversionError("config line without '=': " + line);
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            spliced.push_back("--" + trim(line.substr(0, eq)));
            spliced.push_back(trim(line.substr(eq + 1)));
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        args.insert(args.begin() + 1, spliced.begin(), spliced.end());
        --i;
    }
    return args;
}

ingest::Dataset load_dataset(const std::string& events_path, const std::string& labels_path) {
    const auto events = app::load_events(events_path);
    const auto labels = app::load_labels(labels_path);
    auto assembled = ingest::assemble_dataset(events, labels);
    if (assembled.skipped)
        std::cerr << "warning: " << assembled.skipped << " labeled links have no posts and were skipped\n";
    return std::move(assembled.dataset);
}

fs::path history_path(const fs::path& checkpoint) {
    fs::path p = checkpoint;
    p.replace_extension(".history.json");
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classify links shared on forums from user-interaction signals"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", "rgnn 1.0");

    std::uint64_t seed = 1;

    // synth
    SynthFlags synth;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus (events.jsonl + labels.tsv)");
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();
    synth_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    add_synth_flags(synth_cmd, synth);
    synth_cmd->add_option("--config", "key=value file of synth flags (flags on the command line win)");

    // build-graph
    std::string bg_events, bg_out;
    auto* bg_cmd = app.add_subcommand("build-graph", "Derive the user-user interaction graph");
    bg_cmd->add_option("--events", bg_events, "Event file (JSON lines)")->required();
    bg_cmd->add_option("--out", bg_out, "Edge list output")->required();

    // embed
    embed::WalkConfig walk;
    embed::SgnsConfig sgns;
    std::string em_graph, em_events, em_out;
    auto* em_cmd = app.add_subcommand("embed", "node2vec user embeddings");
    auto* em_graph_opt = em_cmd->add_option("--graph", em_graph, "Edge list from build-graph");
    auto* em_events_opt = em_cmd->add_option("--events", em_events, "Event file (graph is derived from it)");
    em_graph_opt->excludes(em_events_opt);
    em_cmd->add_option("--out", em_out, "Embedding output file")->required();
    em_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    add_walk_flags(em_cmd, walk, sgns);

    // train
    app::TrainSettings settings;
    std::string tr_events, tr_labels, tr_emb, tr_out, tr_variant;
    auto* tr_cmd = app.add_subcommand("train", "Train one model variant");
    tr_cmd->add_option("--events", tr_events, "Event file")->required();
    tr_cmd->add_option("--labels", tr_labels, "Label file")->required();
    tr_cmd->add_option("--embeddings", tr_emb, "Embedding file")->required();
    tr_cmd->add_option("--variant", tr_variant,
                       "rgnn|noreply|traceminer|svm-author|svm-author-commenter|logit-author|logit-author-commenter")
        ->required();
    tr_cmd->add_option("--out", tr_out, "Checkpoint path (history goes next to it)")->required();
    tr_cmd->add_option("--seed", seed, "Random seed (init, shuffling, split)")->capture_default_str();
    add_train_flags(tr_cmd, settings);

    // evaluate
    std::string ev_ckpt, ev_events, ev_labels, ev_emb, ev_out, ev_part = "test";
    auto* ev_cmd = app.add_subcommand("evaluate", "Score a checkpoint");
    ev_cmd->add_option("--checkpoint", ev_ckpt, "Checkpoint from train")->required();
    ev_cmd->add_option("--events", ev_events, "Event file")->required();
    ev_cmd->add_option("--labels", ev_labels, "Label file")->required();
    ev_cmd->add_option("--embeddings", ev_emb, "Embedding file")->required();
    ev_cmd->add_option("--out", ev_out, "Metrics JSON output")->required();
    ev_cmd->add_option("--part", ev_part, "Split part to score: test | validation | train")
        ->check(CLI::IsMember({"test", "validation", "train"}))
        ->capture_default_str();

    // pipeline
    app::PipelineConfig pipe;
    SynthFlags pipe_synth;
    embed::WalkConfig pipe_walk;
    embed::SgnsConfig pipe_sgns;
    app::TrainSettings pipe_settings;
    std::string pipe_out;
    std::vector<std::string> pipe_variants;
    auto* pipe_cmd = app.add_subcommand("pipeline", "synth -> build-graph -> embed -> train -> evaluate");
    pipe_cmd->add_option("--out", pipe_out, "Output directory")->required();
    pipe_cmd->add_option("--seed", seed, "Seed for every stage")->capture_default_str();
    pipe_cmd->add_option("--variants", pipe_variants, "Variants to train (default: all seven)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    add_synth_flags(pipe_cmd, pipe_synth);
    add_walk_flags(pipe_cmd, pipe_walk, pipe_sgns);
    add_train_flags(pipe_cmd, pipe_settings);
    pipe_cmd->add_option("--config", "key=value file of flags (flags on the command line win)");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*synth_cmd) {
            synth.cfg.mode = ingest::signal_mode_from_string(synth.mode);
            const auto corpus = ingest::generate_synthetic(synth.cfg, seed);
            const fs::path dir(synth_out);
            app::write_file(dir / "events.jsonl", [&](std::ostream& o) { ingest::write_events(o, corpus.events); });
            app::write_file(dir / "labels.tsv", [&](std::ostream& o) { ingest::write_labels(o, corpus.labels); });
            std::cout << "wrote " << corpus.events.posts().size() << " posts, "
                      << corpus.events.comments().size() << " comments, " << corpus.labels.size()
                      << " labels to " << dir.string() << '\n';
        } else if (*bg_cmd) {
            const auto events = app::load_events(bg_events);
            const auto graph = graphs::build_global_graph(events);
            app::write_file(bg_out, [&](std::ostream& o) { graphs::write_edge_list(o, graph); });
            std::cout << "graph: " << graph.num_nodes() << " users, " << graph.num_edges() << " edges\n";
        } else if (*em_cmd) {
            if (em_graph.empty() == em_events.empty()) {
                std::cerr << "embed: exactly one of --graph or --events is required\n";
                return 2;
            }
            walk.seed = seed;
            sgns.seed = seed;
            const auto graph = em_graph.empty() ? graphs::build_global_graph(app::load_events(em_events))
                                                : app::load_graph(em_graph);
            const auto result = embed::node2vec(graph, walk, sgns);
            app::write_file(em_out, [&](std::ostream& o) { embed::write_embeddings(o, result.table); });
            std::cout << "embeddings: " << result.table.size() << " x " << result.table.dim();
            for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
                std::cout << (e ? ", " : "; SGNS loss per epoch ") << result.epoch_loss[e];
            std::cout << '\n';
        } else if (*tr_cmd) {
            const auto kind = app::model_kind_from_string(tr_variant);
            settings.hp.seed = seed;
            settings.linear.seed = seed;
            settings.split_seed = seed;
            const auto dataset = load_dataset(tr_events, tr_labels);
            const auto embeddings = app::load_embeddings(tr_emb);
            const model::UserFeatureSource features(embeddings);
            const auto split = bench::split_dataset(dataset, settings.ratios, settings.split_seed);
            auto trained = app::train_model(kind, dataset, split, features, settings);
            trained.embeddings = tr_emb;
            app::save_model(tr_out, trained);
            app::write_file(history_path(tr_out),
                            [&](std::ostream& o) { o << app::history_json(trained).dump(2) << '\n'; });
            std::cout << tr_variant << ": trained " << trained.train_loss.size() << " epochs, selected epoch "
                      << trained.selected_epoch << "; checkpoint " << tr_out << '\n';
        } else if (*ev_cmd) {
            const auto trained = app::load_model(ev_ckpt);
            const auto embeddings = app::load_embeddings(ev_emb);
            if (embeddings.dim() != trained.embed_dim)
                throw DimensionError("embedding dimension " + std::to_string(embeddings.dim()) +
                                     " does not match checkpoint dimension " + std::to_string(trained.embed_dim));
            const auto dataset = load_dataset(ev_events, ev_labels);
            const model::UserFeatureSource features(embeddings);
            const auto split = bench::split_dataset(dataset, trained.settings.ratios, trained.settings.split_seed);
            const auto& part = ev_part == "test" ? split.test : ev_part == "validation" ? split.validation : split.train;
            const auto metrics = app::evaluate(trained, dataset, part, features);
            app::write_file(ev_out, [&](std::ostream& o) { o << app::metrics_report(metrics, trained).dump(2) << '\n'; });
            std::cout << app::to_string(trained.kind) << " on " << ev_part << " (" << metrics.count << " links)\n";
            bench::print_table(std::cout, metrics);
        } else if (*pipe_cmd) {
            pipe_synth.cfg.mode = ingest::signal_mode_from_string(pipe_synth.mode);
            pipe.synth = pipe_synth.cfg;
            pipe.walk = pipe_walk;
            pipe.sgns = pipe_sgns;
            pipe.train = pipe_settings;
            pipe.out_dir = pipe_out;
            pipe.set_seed(seed);
            if (!pipe_variants.empty()) {
                pipe.kinds.clear();
                for (const auto& v : pipe_variants) pipe.kinds.push_back(app::model_kind_from_string(v));
            }
            const auto result = app::run_pipeline(pipe, std::cout);
            std::cout << '\n';
            for (const auto& r : result.results) {
                std::cout << "== " << app::to_string(r.model.kind) << " ==\n";
                bench::print_table(std::cout, r.test);
                std::cout << '\n';
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
