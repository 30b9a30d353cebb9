#include <rgnn/graphs/graph.hpp>

#include <rgnn/core/error.hpp>

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>

namespace rgnn::graphs {

namespace {

std::uint64_t pair_key(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace

std::size_t WeightedGraph::num_edges() const noexcept { return adjacency_.size() / 2; }

std::int64_t WeightedGraph::total_weight() const noexcept {
    std::int64_t total = 0;
    for (const auto& n : adjacency_) total += n.weight;
    return total / 2;
}

std::optional<std::size_t> WeightedGraph::index_of(const UserId& user) const {
    auto it = index_.find(user);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::int64_t WeightedGraph::weight(std::size_t i, std::size_t j) const {
    auto nbrs = neighbors(i);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j,
                               [](const Neighbor& n, std::size_t v) { return n.index < v; });
    if (it == nbrs.end() || it->index != j) return 0;
    return it->weight;
}

std::vector<Edge> WeightedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (std::size_t i = 0; i < num_nodes(); ++i)
        for (const auto& n : neighbors(i))
            if (n.index > i) out.push_back({static_cast<std::uint32_t>(i), n.index, n.weight});
    return out;
}

WeightedGraph WeightedGraph::prefix(std::size_t count) const {
    count = std::min(count, num_nodes());
    GraphBuilder builder;
    for (std::size_t i = 0; i < count; ++i) builder.add_node(users_[i]);
    for (const auto& e : edges())
        if (e.b < count) builder.add_interaction(users_[e.a], users_[e.b], e.weight);
    return builder.build();
}

std::size_t GraphBuilder::add_node(const UserId& user) {
    auto [it, inserted] = index_.emplace(user, users_.size());
    if (inserted) users_.push_back(user);
    return it->second;
}

void GraphBuilder::add_interaction(const UserId& a, const UserId& b, std::int64_t count) {
    const std::size_t ia = add_node(a);
    const std::size_t ib = add_node(b);
    if (ia == ib || count <= 0) return;
    weights_[pair_key(ia, ib)] += count;
}

WeightedGraph GraphBuilder::build() const {
    WeightedGraph g;
    g.users_ = users_;
    g.index_ = index_;
    const std::size_t n = users_.size();
    std::vector<std::vector<Neighbor>> lists(n);
    for (const auto& [key, w] : weights_) {
        const auto a = static_cast<std::uint32_t>(key >> 32);
        const auto b = static_cast<std::uint32_t>(key & 0xffffffffULL);
        lists[a].push_back({b, w});
        lists[b].push_back({a, w});
    }
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(lists[i].begin(), lists[i].end(),
                  [](const Neighbor& x, const Neighbor& y) { return x.index < y.index; });
        g.offsets_[i + 1] = g.offsets_[i] + lists[i].size();
    }
    g.adjacency_.reserve(g.offsets_[n]);
    for (auto& list : lists) g.adjacency_.insert(g.adjacency_.end(), list.begin(), list.end());
    return g;
}

void write_edge_list(std::ostream& out, const WeightedGraph& graph) {
    std::vector<std::tuple<const UserId*, const UserId*, std::int64_t>> rows;
    rows.reserve(graph.num_edges());
    for (const auto& e : graph.edges()) {
        const UserId* a = &graph.user(e.a);
        const UserId* b = &graph.user(e.b);
        if (*b < *a) std::swap(a, b);
        rows.emplace_back(a, b, e.weight);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
        if (*std::get<0>(x) != *std::get<0>(y)) return *std::get<0>(x) < *std::get<0>(y);
        return *std::get<1>(x) < *std::get<1>(y);
    });
    for (const auto& [a, b, w] : rows) out << *a << '\t' << *b << '\t' << w << '\n';
}

WeightedGraph read_edge_list(std::istream& in) {
    std::map<std::pair<UserId, UserId>, std::int64_t> edges;
    std::map<UserId, int> users;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw ParseError(lineno, "expected user<TAB>user<TAB>weight");
        UserId a = line.substr(0, t1);
        UserId b = line.substr(t1 + 1, t2 - t1 - 1);
        std::int64_t w = 0;
        const char* first = line.data() + t2 + 1;
        const char* last = line.data() + line.size();
        auto [ptr, ec] = std::from_chars(first, last, w);
        if (ec != std::errc() || ptr != last || w <= 0)
            throw ParseError(lineno, "invalid edge weight");
        if (a.empty() || b.empty()) throw ParseError(lineno, "empty user id");
        if (a == b) throw ParseError(lineno, "self-edge on " + a);
        if (b < a) std::swap(a, b);
        users[a];
        users[b];
        edges[{a, b}] += w;
    }
    GraphBuilder builder;
    for (const auto& [u, _] : users) builder.add_node(u);
    for (const auto& [pair, w] : edges) builder.add_interaction(pair.first, pair.second, w);
    return builder.build();
}

}  // namespace rgnn::graphs
