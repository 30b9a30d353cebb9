#include <rgnn/embed/node2vec.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/core/rng.hpp>

#include <algorithm>

namespace rgnn::embed {

namespace {

constexpr std::uint64_t kWalkStream = 0x57414c4b;

// Draws from the second-order distribution without materializing it.
std::size_t draw_next(const graphs::WeightedGraph& g, std::size_t prev, std::size_t cur,
                      double inv_p, double inv_q, std::vector<double>& scratch, Rng& rng) {
    auto nbrs = g.neighbors(cur);
    scratch.resize(nbrs.size());
    auto prev_nbrs = g.neighbors(prev);
    // Merge-walk the two sorted adjacency lists to classify each candidate.
    std::size_t k = 0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const auto x = nbrs[i].index;
        double alpha;
        if (x == prev) {
            alpha = inv_p;
        } else {
            while (k < prev_nbrs.size() && prev_nbrs[k].index < x) ++k;
            alpha = (k < prev_nbrs.size() && prev_nbrs[k].index == x) ? 1.0 : inv_q;
        }
        scratch[i] = alpha * static_cast<double>(nbrs[i].weight);
    }
    return nbrs[rng.categorical(scratch)].index;
}

Walk walk_from(const graphs::WeightedGraph& g, const WalkConfig& cfg, std::size_t start,
               int round, std::vector<double>& scratch) {
    Rng rng(derive_seed({cfg.seed, kWalkStream, static_cast<std::uint64_t>(round),
                         static_cast<std::uint64_t>(start)}));
    Walk walk;
    walk.reserve(cfg.walk_length);
    walk.push_back(static_cast<std::uint32_t>(start));
    const double inv_p = 1.0 / cfg.p;
    const double inv_q = 1.0 / cfg.q;
    while (static_cast<int>(walk.size()) < cfg.walk_length) {
        const std::size_t cur = walk.back();
        if (g.degree(cur) == 0) break;
        if (walk.size() == 1) {
            auto nbrs = g.neighbors(cur);
            scratch.resize(nbrs.size());
            for (std::size_t i = 0; i < nbrs.size(); ++i)
                scratch[i] = static_cast<double>(nbrs[i].weight);
            walk.push_back(nbrs[rng.categorical(scratch)].index);
        } else {
            const std::size_t prev = walk[walk.size() - 2];
            walk.push_back(static_cast<std::uint32_t>(draw_next(g, prev, cur, inv_p, inv_q, scratch, rng)));
        }
    }
    return walk;
}

}  // namespace

void WalkConfig::validate() const {
    if (walks_per_node < 1) throw ConfigError("walks-per-node must be >= 1");
    if (walk_length < 2) throw ConfigError("walk-length must be >= 2");
    if (!(p > 0.0)) throw ConfigError("p must be > 0");
    if (!(q > 0.0)) throw ConfigError("q must be > 0");
}

std::vector<double> transition_probs(const graphs::WeightedGraph& graph, std::size_t prev,
                                     std::size_t cur, double p, double q) {
    if (graph.degree(cur) == 0)
        throw Error("transition_probs: node " + graph.user(cur) + " is isolated");
    if (!graph.adjacent(prev, cur))
        throw Error("transition_probs: previous node is not adjacent to current node");
    auto nbrs = graph.neighbors(cur);
    std::vector<double> probs(nbrs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const auto x = nbrs[i].index;
        const double alpha = x == prev ? 1.0 / p : graph.adjacent(prev, x) ? 1.0 : 1.0 / q;
        probs[i] = alpha * static_cast<double>(nbrs[i].weight);
        total += probs[i];
    }
    for (double& v : probs) v /= total;
    return probs;
}

std::vector<double> first_order_probs(const graphs::WeightedGraph& graph, std::size_t cur) {
    if (graph.degree(cur) == 0)
        throw Error("first_order_probs: node " + graph.user(cur) + " is isolated");
    auto nbrs = graph.neighbors(cur);
    std::vector<double> probs(nbrs.size());
    double total = 0.0;
    for (const auto& n : nbrs) total += static_cast<double>(n.weight);
    for (std::size_t i = 0; i < nbrs.size(); ++i)
        probs[i] = static_cast<double>(nbrs[i].weight) / total;
    return probs;
}

std::vector<Walk> sample_walks_serial(const graphs::WeightedGraph& graph, const WalkConfig& cfg) {
    cfg.validate();
    const std::size_t n = graph.num_nodes();
    std::vector<Walk> walks(n * cfg.walks_per_node);
    std::vector<double> scratch;
    for (int r = 0; r < cfg.walks_per_node; ++r)
        for (std::size_t v = 0; v < n; ++v) walks[r * n + v] = walk_from(graph, cfg, v, r, scratch);
    return walks;
}

std::vector<Walk> sample_walks(const graphs::WeightedGraph& graph, const WalkConfig& cfg) {
    cfg.validate();
    const std::size_t n = graph.num_nodes();
    const std::int64_t total = static_cast<std::int64_t>(n) * cfg.walks_per_node;
    std::vector<Walk> walks(static_cast<std::size_t>(total));
#pragma omp parallel
    {
        std::vector<double> scratch;
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t w = 0; w < total; ++w) {
            const auto r = static_cast<int>(w / static_cast<std::int64_t>(n));
            const auto v = static_cast<std::size_t>(w % static_cast<std::int64_t>(n));
            walks[static_cast<std::size_t>(w)] = walk_from(graph, cfg, v, r, scratch);
        }
    }
    return walks;
}

}  // namespace rgnn::embed
