#pragma once

#include <rgnn/graphs/graph.hpp>
#include <rgnn/ingest/events.hpp>
#include <rgnn/ingest/labels.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rgnn::ingest {

/// One post of a link's cascade with its comment tree.
struct PostView {
    std::string id;
    UserId author;
    std::int64_t ts = 0;
    /// Distinct comment authors in order of first comment.
    std::vector<UserId> commenters;
    std::vector<CommentEvent> comments;
    /// Node set = {author} then commenters (author not repeated).
    graphs::ReplyGraph reply_graph;
};

/// A labeled link and its time-ordered posts.
struct LinkSample {
    std::string link_id;
    int label = 0;
    std::vector<PostView> posts;
};

struct Dataset {
    std::vector<LinkSample> samples;
    int num_classes = 0;
    std::vector<std::string> class_names;

    std::vector<int> labels() const;
};

struct AssembleResult {
    Dataset dataset;
    /// Labeled links with no posts in the log.
    std::size_t skipped = 0;
};

/// Builds one LinkSample per labeled link that has at least one post.
/// Samples follow the order of `labels`.
AssembleResult assemble_dataset(const EventLog& log, std::span<const LinkRecord> labels);

/// Builds the per-post view (commenters, comment tree, reply graph).
PostView make_post_view(const EventLog& log, const PostEvent& post);

}  // namespace rgnn::ingest
