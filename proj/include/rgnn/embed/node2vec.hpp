#pragma once

#include <rgnn/embed/embedding_table.hpp>
#include <rgnn/graphs/graph.hpp>

#include <cstdint>
#include <vector>

namespace rgnn::embed {

struct WalkConfig {
    int walks_per_node = 10;
    int walk_length = 40;
    double p = 1.0;  ///< return parameter
    double q = 1.0;  ///< in-out parameter
    std::uint64_t seed = 1;

    void validate() const;
};

using Walk = std::vector<std::uint32_t>;

/// Second-order transition distribution from `cur` given the previous node
/// `prev`, aligned with graph.neighbors(cur). Unnormalized mass of neighbor x
/// is alpha(prev, x) * w(cur, x) with alpha = 1/p if x == prev, 1 if x is
/// adjacent to prev, 1/q otherwise. Throws if cur is isolated or prev is not
/// adjacent to cur.
std::vector<double> transition_probs(const graphs::WeightedGraph& graph, std::size_t prev,
                                     std::size_t cur, double p, double q);

/// w(cur, x) / sum w(cur, .), aligned with graph.neighbors(cur).
std::vector<double> first_order_probs(const graphs::WeightedGraph& graph, std::size_t cur);

/// `walks_per_node` rounds; in each round one walk starts at every node, in
/// node order. Walk (round, node) draws from its own seeded stream, so the
/// OpenMP and serial versions return identical walks.
std::vector<Walk> sample_walks(const graphs::WeightedGraph& graph, const WalkConfig& cfg);
std::vector<Walk> sample_walks_serial(const graphs::WeightedGraph& graph, const WalkConfig& cfg);

}  // namespace rgnn::embed
