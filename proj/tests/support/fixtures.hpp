#pragma once
// Test fixtures and independent brute-force oracles. Nothing here calls the
// library code it is meant to check.

#include <rgnn/core/rng.hpp>
#include <rgnn/graphs/graph.hpp>
#include <rgnn/ingest/dataset.hpp>
#include <rgnn/ingest/events.hpp>
#include <rgnn/embed/embedding_table.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace rgnn::testing {

inline ingest::PostEvent post(std::string id, std::string author, std::string link, std::int64_t ts) {
    return {std::move(id), std::move(author), std::move(link), ts};
}

inline ingest::CommentEvent comment(std::string id, std::string author, std::string post_id,
                                    std::string parent, std::int64_t ts) {
    return {std::move(id), std::move(author), std::move(post_id), std::move(parent), ts};
}

// Dense symmetric weight matrix with user names "n0", "n1", ...
struct DenseGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::int64_t>> w;

    explicit DenseGraph(std::size_t nodes) : n(nodes), w(nodes, std::vector<std::int64_t>(nodes, 0)) {}

    graphs::WeightedGraph build() const {
        graphs::GraphBuilder b;
        for (std::size_t i = 0; i < n; ++i) b.add_node("n" + std::to_string(i));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (w[i][j] > 0) b.add_interaction("n" + std::to_string(i), "n" + std::to_string(j), w[i][j]);
        return b.build();
    }
};

// Erdos-Renyi style graph with integer weights in [1, max_w].
inline DenseGraph random_dense_graph(Rng& rng, std::size_t n, double edge_prob, int max_w) {
    DenseGraph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.bernoulli(edge_prob)) g.w[i][j] = g.w[j][i] = rng.range(1, max_w);
    return g;
}

// Brute-force node2vec bias: alpha(prev, x) * w(cur, x), normalized.
inline std::vector<double> oracle_transition(const DenseGraph& g, std::size_t prev, std::size_t cur,
                                             double p, double q) {
    std::vector<double> mass;
    double total = 0.0;
    for (std::size_t x = 0; x < g.n; ++x) {
        if (g.w[cur][x] == 0) continue;
        double alpha;
        if (x == prev) alpha = 1.0 / p;
        else if (g.w[prev][x] > 0) alpha = 1.0;
        else alpha = 1.0 / q;
        mass.push_back(alpha * static_cast<double>(g.w[cur][x]));
        total += mass.back();
    }
    for (double& m : mass) m /= total;
    return mass;
}

inline std::vector<double> oracle_first_order(const DenseGraph& g, std::size_t cur) {
    std::vector<double> out;
    double total = 0.0;
    for (std::size_t x = 0; x < g.n; ++x) total += static_cast<double>(g.w[cur][x]);
    for (std::size_t x = 0; x < g.n; ++x)
        if (g.w[cur][x] > 0) out.push_back(static_cast<double>(g.w[cur][x]) / total);
    return out;
}

// D^-1/2 (A+I) D^-1/2 computed entry by entry.
inline std::vector<std::vector<double>> oracle_normalized(const DenseGraph& g) {
    std::vector<double> deg(g.n, 1.0);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) deg[i] += static_cast<double>(g.w[i][j]);
    std::vector<std::vector<double>> out(g.n, std::vector<double>(g.n));
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j) {
            const double a = static_cast<double>(g.w[i][j]) + (i == j ? 1.0 : 0.0);
            out[i][j] = a / (std::sqrt(deg[i]) * std::sqrt(deg[j]));
        }
    return out;
}

// Random embedding table over users u0..u{n-1}.
inline embed::EmbeddingTable random_table(Rng& rng, std::size_t users, std::size_t dim) {
    std::vector<std::string> names;
    std::vector<double> values;
    for (std::size_t i = 0; i < users; ++i) {
        names.push_back("u" + std::to_string(i));
        for (std::size_t k = 0; k < dim; ++k) values.push_back(rng.uniform(-1.0, 1.0));
    }
    return embed::EmbeddingTable(std::move(names), dim, std::move(values));
}

// Random link: posts by random users with random reply trees (depth unrestricted).
inline ingest::LinkSample random_link(Rng& rng, std::size_t users, int label, int posts, int max_comments,
                                      const std::string& link_id = "L") {
    std::vector<ingest::PostEvent> ps;
    std::vector<ingest::CommentEvent> cs;
    std::int64_t ts = 100;
    for (int p = 0; p < posts; ++p) {
        const std::string pid = link_id + "_p" + std::to_string(p);
        ps.push_back(post(pid, "u" + std::to_string(rng.index(users)), link_id, ts++));
        const int nc = static_cast<int>(rng.range(0, max_comments));
        std::vector<std::string> ids;
        for (int c = 0; c < nc; ++c) {
            const std::string cid = pid + "_c" + std::to_string(c);
            std::string parent = pid;
            if (!ids.empty() && rng.bernoulli(0.5)) parent = ids[rng.index(ids.size())];
            cs.push_back(comment(cid, "u" + std::to_string(rng.index(users)), pid, parent, ts++));
            ids.push_back(cid);
        }
    }
    ingest::EventLog log(ps, cs);
    ingest::LinkSample s;
    s.link_id = link_id;
    s.label = label;
    for (const auto& p : log.posts()) s.posts.push_back(ingest::make_post_view(log, p));
    return s;
}

}  // namespace rgnn::testing
