#pragma once

#include <rgnn/embed/embedding_table.hpp>
#include <rgnn/embed/node2vec.hpp>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rgnn::embed {

struct SgnsConfig {
    int dim = 64;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    double lr = 0.025;
    double lr_floor = 0.0001;
    std::uint64_t seed = 1;
    std::size_t table_size = 1'000'000;

    void validate() const;
};

struct SgnsResult {
    EmbeddingTable table;
    /// Mean per-pair negative log-likelihood for each epoch.
    std::vector<double> epoch_loss;
};

/// (center, context) pairs within a fixed symmetric window, in scan order.
std::vector<std::pair<std::uint32_t, std::uint32_t>> positive_pairs(std::span<const std::uint32_t> walk,
                                                                     int window);

/// Center vectors start uniform in [-0.5/d, 0.5/d]; context vectors start at
/// zero and are discarded after training.
std::vector<double> initial_center_vectors(std::size_t vocab_size, const SgnsConfig& cfg);

/// Skip-gram with negative sampling over the walk corpus. Sequential and
/// deterministic given cfg.seed. The learning rate decays linearly from lr
/// to lr_floor over all epochs. Negatives come from a table built from walk
/// token frequencies raised to 0.75.
SgnsResult train_sgns(const std::vector<Walk>& walks, const SgnsConfig& cfg,
                      std::span<const UserId> vocab);

/// Walks + SGNS on an interaction graph.
SgnsResult node2vec(const graphs::WeightedGraph& graph, const WalkConfig& walk_cfg,
                    const SgnsConfig& sgns_cfg);

}  // namespace rgnn::embed
