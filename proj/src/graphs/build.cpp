#include <rgnn/graphs/graph.hpp>

#include <unordered_map>

namespace rgnn::graphs {

InteractionGraph build_global_graph(const ingest::EventLog& log) {
    GraphBuilder builder;
    for (const auto& user : log.users()) builder.add_node(user);
    for (const auto& c : log.comments()) {
        const UserId* partner = nullptr;
        if (c.parent == c.post) {
            partner = &log.find_post(c.post)->author;
        } else {
            partner = &log.find_comment(c.parent)->author;
        }
        builder.add_interaction(c.author, *partner);
    }
    return builder.build();
}

ReplyGraph build_reply_graph(const ingest::PostEvent& post,
                             std::span<const ingest::CommentEvent> comments) {
    GraphBuilder builder;
    builder.add_node(post.author);
    std::unordered_map<std::string, const UserId*> author_of;
    author_of.reserve(comments.size() + 1);
    author_of.emplace(post.id, &post.author);
    for (const auto& c : comments) {
        builder.add_node(c.author);
        author_of.emplace(c.id, &c.author);
    }
    for (const auto& c : comments) {
        auto it = author_of.find(c.parent);
        if (it == author_of.end()) continue;
        builder.add_interaction(c.author, *it->second);
    }
    return builder.build();
}

}  // namespace rgnn::graphs
