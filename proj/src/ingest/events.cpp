#include <rgnn/ingest/events.hpp>

#include <rgnn/core/error.hpp>

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

namespace rgnn::ingest {

namespace {

template <class Event>
bool time_order(const Event& a, const Event& b) {
    if (a.ts != b.ts) return a.ts < b.ts;
    return a.id < b.id;
}

std::string string_field(const nlohmann::json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw ParseError(line, std::string("missing or non-string field '") + key + "'");
    return it->get<std::string>();
}

std::int64_t ts_field(const nlohmann::json& obj, std::size_t line) {
    auto it = obj.find("ts");
    if (it == obj.end() || !it->is_number_integer())
        throw ParseError(line, "missing or non-integer field 'ts'");
    auto ts = it->get<std::int64_t>();
    if (ts < 0) throw ParseError(line, "negative timestamp");
    return ts;
}

}  // namespace

EventLog::EventLog(std::vector<PostEvent> posts, std::vector<CommentEvent> comments)
    : posts_(std::move(posts)), comments_(std::move(comments)) {
    std::sort(posts_.begin(), posts_.end(), time_order<PostEvent>);
    std::sort(comments_.begin(), comments_.end(), time_order<CommentEvent>);

    post_index_.reserve(posts_.size());
    for (std::size_t i = 0; i < posts_.size(); ++i) {
        if (posts_[i].ts < 0) throw IntegrityError("post " + posts_[i].id + " has negative timestamp");
        if (!post_index_.emplace(posts_[i].id, i).second)
            throw IntegrityError("duplicate post id " + posts_[i].id);
    }
    comment_index_.reserve(comments_.size());
    for (std::size_t i = 0; i < comments_.size(); ++i) {
        const auto& c = comments_[i];
        if (c.ts < 0) throw IntegrityError("comment " + c.id + " has negative timestamp");
        if (post_index_.count(c.id))
            throw IntegrityError("comment id " + c.id + " collides with a post id");
        if (!comment_index_.emplace(c.id, i).second)
            throw IntegrityError("duplicate comment id " + c.id);
    }

    comments_by_post_.assign(posts_.size(), {});
    for (std::size_t i = 0; i < comments_.size(); ++i) {
        const auto& c = comments_[i];
        auto post = post_index_.find(c.post);
        if (post == post_index_.end())
            throw IntegrityError("comment " + c.id + " references unknown post " + c.post);
        if (c.parent != c.post) {
            auto parent = comment_index_.find(c.parent);
            if (parent == comment_index_.end())
                throw IntegrityError("comment " + c.id + " has dangling parent " + c.parent);
            if (comments_[parent->second].post != c.post)
                throw IntegrityError("comment " + c.id + " has parent " + c.parent +
                                     " on a different post");
        }
        comments_by_post_[post->second].push_back(i);
    }

    // Every parent chain must terminate at the post. 0 = unvisited,
    // 1 = on current chain, 2 = known to terminate.
    std::vector<unsigned char> state(comments_.size(), 0);
    std::vector<std::size_t> chain;
    for (std::size_t start = 0; start < comments_.size(); ++start) {
        chain.clear();
        std::size_t cur = start;
        while (true) {
            if (state[cur] == 2) break;
            if (state[cur] == 1)
                throw IntegrityError("cycle in parent chain through comment " + comments_[cur].id);
            state[cur] = 1;
            chain.push_back(cur);
            const auto& c = comments_[cur];
            if (c.parent == c.post) break;
            cur = comment_index_.at(c.parent);
        }
        for (std::size_t i : chain) state[i] = 2;
    }
}

const PostEvent* EventLog::find_post(const std::string& id) const {
    auto it = post_index_.find(id);
    return it == post_index_.end() ? nullptr : &posts_[it->second];
}

const CommentEvent* EventLog::find_comment(const std::string& id) const {
    auto it = comment_index_.find(id);
    return it == comment_index_.end() ? nullptr : &comments_[it->second];
}

std::span<const std::size_t> EventLog::comments_of(const std::string& post_id) const {
    auto it = post_index_.find(post_id);
    if (it == post_index_.end()) return {};
    return comments_by_post_[it->second];
}

std::vector<CommentEvent> EventLog::comment_tree(const std::string& post_id) const {
    std::vector<CommentEvent> out;
    for (std::size_t i : comments_of(post_id)) out.push_back(comments_[i]);
    return out;
}

std::vector<UserId> EventLog::users() const {
    std::set<UserId> users;
    for (const auto& p : posts_) users.insert(p.author);
    for (const auto& c : comments_) users.insert(c.author);
    return {users.begin(), users.end()};
}

EventLog parse_events(std::istream& in) {
    std::vector<PostEvent> posts;
    std::vector<CommentEvent> comments;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) throw ParseError(lineno, "expected a JSON object");
        const std::string type = string_field(obj, "type", lineno);
        if (type == "post") {
            posts.push_back({string_field(obj, "id", lineno), string_field(obj, "author", lineno),
                             string_field(obj, "link", lineno), ts_field(obj, lineno)});
        } else if (type == "comment") {
            comments.push_back({string_field(obj, "id", lineno),
                                string_field(obj, "author", lineno),
                                string_field(obj, "post", lineno),
                                string_field(obj, "parent", lineno), ts_field(obj, lineno)});
        } else {
            throw ParseError(lineno, "unknown event type '" + type + "'");
        }
    }
    return EventLog(std::move(posts), std::move(comments));
}

void write_events(std::ostream& out, const EventLog& log) {
    const auto& posts = log.posts();
    const auto& comments = log.comments();
    std::size_t i = 0, j = 0;
    auto emit_post = [&](const PostEvent& p) {
        nlohmann::ordered_json obj;
        obj["type"] = "post";
        obj["id"] = p.id;
        obj["author"] = p.author;
        obj["link"] = p.link;
        obj["ts"] = p.ts;
        out << obj.dump() << '\n';
    };
    auto emit_comment = [&](const CommentEvent& c) {
        nlohmann::ordered_json obj;
        obj["type"] = "comment";
        obj["id"] = c.id;
        obj["author"] = c.author;
        obj["post"] = c.post;
        obj["parent"] = c.parent;
        obj["ts"] = c.ts;
        out << obj.dump() << '\n';
    };
    while (i < posts.size() || j < comments.size()) {
        bool take_post;
        if (i == posts.size()) take_post = false;
        else if (j == comments.size()) take_post = true;
        else if (posts[i].ts != comments[j].ts) take_post = posts[i].ts < comments[j].ts;
        else take_post = posts[i].id <= comments[j].id;
        if (take_post) emit_post(posts[i++]);
        else emit_comment(comments[j++]);
    }
}

}  // namespace rgnn::ingest
