#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rgnn::ingest {

using UserId = std::string;

struct PostEvent {
    std::string id;
    UserId author;
    std::string link;
    std::int64_t ts = 0;

    bool operator==(const PostEvent&) const = default;
};

struct CommentEvent {
    std::string id;
    UserId author;
    std::string post;
    std::string parent;  ///< a post id or a comment id within the same post
    std::int64_t ts = 0;

    bool operator==(const CommentEvent&) const = default;
};

/// Validated, time-ordered collection of forum events.
///
/// Posts and comments are each kept sorted by (ts, id). Construction checks
/// id uniqueness, that every comment's post exists, that every parent exists
/// and belongs to the same post, and that parent chains are acyclic.
class EventLog {
public:
    EventLog() = default;
    EventLog(std::vector<PostEvent> posts, std::vector<CommentEvent> comments);

    const std::vector<PostEvent>& posts() const noexcept { return posts_; }
    const std::vector<CommentEvent>& comments() const noexcept { return comments_; }

    const PostEvent* find_post(const std::string& id) const;
    const CommentEvent* find_comment(const std::string& id) const;

    /// Indices into comments() for one post, in time order.
    std::span<const std::size_t> comments_of(const std::string& post_id) const;

    /// Comments of one post, copied, in time order.
    std::vector<CommentEvent> comment_tree(const std::string& post_id) const;

    /// Every user that authored a post or comment, sorted lexicographically.
    std::vector<UserId> users() const;

    bool operator==(const EventLog& other) const {
        return posts_ == other.posts_ && comments_ == other.comments_;
    }

private:
    std::vector<PostEvent> posts_;
    std::vector<CommentEvent> comments_;
    std::unordered_map<std::string, std::size_t> post_index_;
    std::unordered_map<std::string, std::size_t> comment_index_;
    std::vector<std::vector<std::size_t>> comments_by_post_;
};

/// Reads line-delimited JSON events. Blank lines are skipped.
/// Throws ParseError (with line number) or IntegrityError.
EventLog parse_events(std::istream& in);

/// Writes posts and comments merged in (ts, id) order, one JSON object per line.
void write_events(std::ostream& out, const EventLog& log);

}  // namespace rgnn::ingest
