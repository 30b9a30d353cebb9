#pragma once

#include <rgnn/ingest/events.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rgnn::graphs {

using ingest::UserId;

struct Neighbor {
    std::uint32_t index;
    std::int64_t weight;

    bool operator==(const Neighbor&) const = default;
};

struct Edge {
    std::uint32_t a;  ///< a < b
    std::uint32_t b;
    std::int64_t weight;

    bool operator==(const Edge&) const = default;
};

/// Undirected graph over users with positive integer edge weights.
///
/// Every user has a contiguous index; the id<->index map is part of the
/// value. Adjacency lists are sorted by neighbor index. No self-edges.
class WeightedGraph {
public:
    WeightedGraph() = default;

    std::size_t num_nodes() const noexcept { return users_.size(); }
    std::size_t num_edges() const noexcept;
    std::int64_t total_weight() const noexcept;

    const UserId& user(std::size_t index) const { return users_.at(index); }
    const std::vector<UserId>& users() const noexcept { return users_; }
    std::optional<std::size_t> index_of(const UserId& user) const;

    std::span<const Neighbor> neighbors(std::size_t index) const {
        return {adjacency_.data() + offsets_[index], adjacency_.data() + offsets_[index + 1]};
    }
    std::size_t degree(std::size_t index) const { return offsets_[index + 1] - offsets_[index]; }

    /// Weight of {i, j}; 0 when not adjacent.
    std::int64_t weight(std::size_t i, std::size_t j) const;
    bool adjacent(std::size_t i, std::size_t j) const { return weight(i, j) > 0; }

    /// Each undirected edge once, ordered by (a, b).
    std::vector<Edge> edges() const;

    /// Subgraph over the first `count` nodes (indices preserved).
    WeightedGraph prefix(std::size_t count) const;

    bool operator==(const WeightedGraph& other) const {
        return users_ == other.users_ && offsets_ == other.offsets_ &&
               adjacency_ == other.adjacency_;
    }

private:
    friend class GraphBuilder;

    std::vector<UserId> users_;
    std::unordered_map<UserId, std::size_t> index_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
};

/// Accumulates nodes and interactions, then freezes into a WeightedGraph.
class GraphBuilder {
public:
    /// Returns the node's index, adding it if new. Indices follow insertion order.
    std::size_t add_node(const UserId& user);

    /// Adds `count` to the undirected weight between two users (added as
    /// nodes if needed). Self-interactions add the node but no edge.
    void add_interaction(const UserId& a, const UserId& b, std::int64_t count = 1);

    WeightedGraph build() const;

private:
    std::vector<UserId> users_;
    std::unordered_map<UserId, std::size_t> index_;
    std::unordered_map<std::uint64_t, std::int64_t> weights_;
};

/// Global user-user interaction graph: every user in the log is a node,
/// nodes indexed in lexicographic id order.
using InteractionGraph = WeightedGraph;

/// Local reply graph of one post: node 0 is the post author, followed by
/// commenters in order of first comment.
using ReplyGraph = WeightedGraph;

/// Post-replies (comment -> post author) and comment-replies
/// (comment -> parent comment author) counted over the whole log.
InteractionGraph build_global_graph(const ingest::EventLog& log);

/// Same counting rule restricted to one post's comment tree. `comments`
/// must all belong to `post`.
ReplyGraph build_reply_graph(const ingest::PostEvent& post,
                             std::span<const ingest::CommentEvent> comments);

/// `user_i<TAB>user_j<TAB>weight`, user_i < user_j, lines sorted.
void write_edge_list(std::ostream& out, const WeightedGraph& graph);

/// Inverse of write_edge_list. Nodes are the users that appear on some line,
/// indexed lexicographically.
WeightedGraph read_edge_list(std::istream& in);

}  // namespace rgnn::graphs
