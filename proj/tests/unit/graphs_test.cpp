#include <doctest.h>

#include <fixtures.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/graphs/graph.hpp>
#include <rgnn/ingest/synth.hpp>

#include <set>
#include <sstream>

using namespace rgnn;
using namespace rgnn::graphs;
using rgnn::testing::comment;
using rgnn::testing::post;

namespace {

std::int64_t w(const WeightedGraph& g, const std::string& a, const std::string& b) {
    return g.weight(*g.index_of(a), *g.index_of(b));
}

}  // namespace

TEST_CASE("global graph: post-reply and comment-reply") {
    const ingest::EventLog log({post("P", "u1", "L", 1)},
                               {comment("c1", "u2", "P", "P", 2), comment("c2", "u3", "P", "c1", 3)});
    const auto g = build_global_graph(log);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 2);
    CHECK(w(g, "u1", "u2") == 1);
    CHECK(w(g, "u2", "u3") == 1);
    CHECK(w(g, "u1", "u3") == 0);

    std::ostringstream out;
    write_edge_list(out, g);
    CHECK(out.str() == "u1\tu2\t1\nu2\tu3\t1\n");
}

TEST_CASE("global graph: both reply directions accumulate on one edge") {
    const ingest::EventLog log({post("P", "u1", "L", 1)},
                               {comment("c1", "u3", "P", "P", 2), comment("c2", "u2", "P", "c1", 3),
                                comment("c3", "u3", "P", "c2", 4)});
    const auto g = build_global_graph(log);
    CHECK(w(g, "u2", "u3") == 2);
    CHECK(w(g, "u3", "u2") == 2);
}

TEST_CASE("global graph: self replies add no edge but keep the node") {
    const ingest::EventLog log({post("P", "u1", "L", 1)}, {comment("c1", "u1", "P", "P", 2)});
    const auto g = build_global_graph(log);
    CHECK(g.num_nodes() == 1);
    CHECK(g.num_edges() == 0);
    CHECK(g.index_of("u1").has_value());
}

TEST_CASE("reply graph examples") {
    const auto p = post("P", "u1", "L", 1);
    SUBCASE("no comments") {
        const auto g = build_reply_graph(p, {});
        CHECK(g.num_nodes() == 1);
        CHECK(g.user(0) == "u1");
        CHECK(g.num_edges() == 0);
    }
    SUBCASE("two top-level comments by one user") {
        const std::vector<ingest::CommentEvent> cs{comment("c1", "u2", "P", "P", 2),
                                                   comment("c2", "u2", "P", "P", 3)};
        const auto g = build_reply_graph(p, cs);
        CHECK(g.num_nodes() == 2);
        CHECK(w(g, "u1", "u2") == 2);
    }
    SUBCASE("chain u1 <- u2 <- u3 <- u2") {
        const std::vector<ingest::CommentEvent> cs{comment("c1", "u2", "P", "P", 2),
                                                   comment("c2", "u3", "P", "c1", 3),
                                                   comment("c3", "u2", "P", "c2", 4)};
        const auto g = build_reply_graph(p, cs);
        CHECK(g.num_nodes() == 3);
        CHECK(w(g, "u1", "u2") == 1);
        CHECK(w(g, "u2", "u3") == 2);
        CHECK(g.users() == std::vector<std::string>{"u1", "u2", "u3"});
    }
    SUBCASE("author commenting on own post stays a single node") {
        const std::vector<ingest::CommentEvent> cs{comment("c1", "u2", "P", "P", 2),
                                                   comment("c2", "u1", "P", "c1", 3)};
        const auto g = build_reply_graph(p, cs);
        CHECK(g.num_nodes() == 2);
        CHECK(w(g, "u1", "u2") == 2);
    }
}

TEST_CASE("graph invariants on synthetic logs") {
    ingest::SynthConfig cfg;
    cfg.users = 80;
    cfg.links_per_class = 6;
    const auto corpus = ingest::generate_synthetic(cfg, 3);
    const auto& log = corpus.events;
    const auto g = build_global_graph(log);

    CHECK(g.users() == log.users());

    // conservation: total weight = comments whose parent has a different author
    std::int64_t qualifying = 0;
    for (const auto& c : log.comments()) {
        const auto* parent_post = log.find_post(c.parent);
        const std::string& other = parent_post ? parent_post->author : log.find_comment(c.parent)->author;
        if (other != c.author) ++qualifying;
    }
    CHECK(g.total_weight() == qualifying);

    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        CHECK(g.weight(i, i) == 0);
        for (const auto& nb : g.neighbors(i)) {
            CHECK(nb.weight >= 1);
            CHECK(g.weight(nb.index, i) == nb.weight);
        }
    }

    // aggregation bound, and reply graph node set = commenters + author
    for (const auto& p : log.posts()) {
        const auto tree = log.comment_tree(p.id);
        const auto rg = build_reply_graph(p, tree);
        std::set<std::string> expected{p.author};
        for (const auto& c : tree) expected.insert(c.author);
        CHECK(std::set<std::string>(rg.users().begin(), rg.users().end()) == expected);
        for (const auto& e : rg.edges())
            CHECK(w(g, rg.user(e.a), rg.user(e.b)) >= e.weight);
    }
}

TEST_CASE("reply graph locality: other posts do not matter") {
    const auto p = post("P", "u1", "L", 1);
    const ingest::EventLog small({p}, {comment("c1", "u2", "P", "P", 2)});
    const ingest::EventLog big({p, post("Q", "u2", "L", 1)},
                               {comment("c1", "u2", "P", "P", 2), comment("d1", "u1", "Q", "Q", 3),
                                comment("d2", "u3", "Q", "d1", 4)});
    CHECK(build_reply_graph(p, small.comment_tree("P")) == build_reply_graph(p, big.comment_tree("P")));
}

TEST_CASE("edge list round trip and errors") {
    GraphBuilder b;
    b.add_interaction("b", "a", 2);
    b.add_interaction("c", "a");
    b.add_interaction("a", "b");
    const auto g = b.build();
    std::ostringstream out;
    write_edge_list(out, g);
    CHECK(out.str() == "a\tb\t3\na\tc\t1\n");
    std::istringstream in(out.str());
    const auto back = read_edge_list(in);
    CHECK(back.users() == std::vector<std::string>{"a", "b", "c"});
    CHECK(back.weight(0, 1) == 3);

    std::istringstream empty("");
    CHECK(read_edge_list(empty).num_nodes() == 0);
    for (const std::string bad : {"a\tb\n", "a\tb\t0\n", "a\ta\t1\n", "a\tb\tx\n"}) {
        std::istringstream s(bad);
        CHECK_THROWS_AS(read_edge_list(s), ParseError);
    }
}

TEST_CASE("prefix keeps the induced subgraph on the first nodes") {
    GraphBuilder b;
    for (const char* u : {"x", "y", "z"}) b.add_node(u);
    b.add_interaction("x", "y");
    b.add_interaction("y", "z", 4);
    const auto g = b.build().prefix(2);
    CHECK(g.num_nodes() == 2);
    CHECK(g.num_edges() == 1);
    CHECK(g.weight(0, 1) == 1);
}
