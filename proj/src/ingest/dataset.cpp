#include <rgnn/ingest/dataset.hpp>

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace rgnn::ingest {

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.label);
    return out;
}

PostView make_post_view(const EventLog& log, const PostEvent& post) {
    PostView view;
    view.id = post.id;
    view.author = post.author;
    view.ts = post.ts;
    view.comments = log.comment_tree(post.id);
    std::unordered_set<UserId> seen;
    for (const auto& c : view.comments)
        if (seen.insert(c.author).second) view.commenters.push_back(c.author);
    view.reply_graph = graphs::build_reply_graph(post, view.comments);
    return view;
}

AssembleResult assemble_dataset(const EventLog& log, std::span<const LinkRecord> labels) {
    std::unordered_map<std::string, std::vector<const PostEvent*>> by_link;
    // posts() is already (ts, id) ordered, so each list is time-ordered.
    for (const auto& p : log.posts()) by_link[p.link].push_back(&p);

    AssembleResult result;
    int max_label = -1;
    for (const auto& rec : labels) max_label = std::max(max_label, rec.label);
    result.dataset.num_classes = max_label + 1;
    for (int c = 0; c < result.dataset.num_classes; ++c)
        result.dataset.class_names.push_back(std::to_string(c));

    for (const auto& rec : labels) {
        auto it = by_link.find(rec.link_id);
        if (it == by_link.end()) {
            ++result.skipped;
            continue;
        }
        LinkSample sample;
        sample.link_id = rec.link_id;
        sample.label = rec.label;
        sample.posts.reserve(it->second.size());
        for (const PostEvent* p : it->second) sample.posts.push_back(make_post_view(log, *p));
        result.dataset.samples.push_back(std::move(sample));
    }
    return result;
}

}  // namespace rgnn::ingest
