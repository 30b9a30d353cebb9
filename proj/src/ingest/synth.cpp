#include <rgnn/ingest/synth.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/core/parallel.hpp>
#include <rgnn/core/rng.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace rgnn::ingest {

namespace {

constexpr std::uint64_t kStructureStream = 0x5354;
constexpr std::uint64_t kIdentityStream = 0x4944;
constexpr std::uint64_t kCommunityStream = 0x434f;
constexpr std::int64_t kEpoch = 1'600'000'000;
constexpr int kMaxDepth = 3;

std::string fmt_id(const char* pattern, int a, int b = 0, int c = 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

struct CommentShape {
    int parent;  // -1 = the post, else index of an earlier comment
    int offset;  // community offset from the parent author's community (0 = same)
    std::int64_t gap;
};

struct PostShape {
    int block;  // order mode: community slot; mixture mode: unused
    std::vector<CommentShape> comments;
};

// Class-independent shape of link j, in canonical block order.
std::vector<PostShape> link_structure(const SynthConfig& cfg, std::uint64_t seed, int j) {
    Rng rng(derive_seed({seed, kStructureStream, static_cast<std::uint64_t>(j)}));
    const int k = cfg.communities;
    const int num_posts = static_cast<int>(rng.range(cfg.posts_min, cfg.posts_max));

    std::vector<int> block_size(k, num_posts / k);
    std::vector<int> blocks(k);
    std::iota(blocks.begin(), blocks.end(), 0);
    rng.shuffle(std::span<int>(blocks));
    for (int i = 0; i < num_posts % k; ++i) ++block_size[blocks[i]];

    std::vector<PostShape> posts;
    posts.reserve(num_posts);
    for (int b = 0; b < k; ++b) {
        for (int n = 0; n < block_size[b]; ++n) {
            PostShape post{b, {}};
            const int num_comments = static_cast<int>(rng.range(cfg.comments_min, cfg.comments_max));
            std::vector<int> depth;
            for (int i = 0; i < num_comments; ++i) {
                int parent = -1;
                if (i > 0 && rng.bernoulli(cfg.nested_reply_prob)) {
                    std::vector<int> eligible;
                    for (int e = 0; e < i; ++e)
                        if (depth[e] < kMaxDepth) eligible.push_back(e);
                    if (!eligible.empty()) parent = eligible[rng.index(eligible.size())];
                }
                depth.push_back(parent < 0 ? 1 : depth[parent] + 1);
                int offset = 0;
                if (k > 1 && !rng.bernoulli(cfg.intra_prob))
                    offset = static_cast<int>(rng.range(1, k - 1));
                post.comments.push_back({parent, offset, rng.range(1, 600)});
            }
            posts.push_back(std::move(post));
        }
    }
    return posts;
}

std::vector<double> mixture_weights(const SynthConfig& cfg, int cls) {
    const int k = cfg.communities;
    std::vector<double> w(k, k > 1 ? (1.0 - cfg.mixture_dominance) / (k - 1) : 1.0);
    if (k > 1) w[cls % k] = cfg.mixture_dominance;
    return w;
}

}  // namespace

const char* to_string(SignalMode mode) {
    return mode == SignalMode::order ? "order" : "mixture";
}

SignalMode signal_mode_from_string(const std::string& name) {
    if (name == "order") return SignalMode::order;
    if (name == "mixture") return SignalMode::mixture;
    throw ConfigError("unknown signal mode '" + name + "' (expected order|mixture)");
}

void SynthConfig::validate() const {
    if (communities < 1) throw ConfigError("communities must be >= 1");
    if (users < 2 * communities) throw ConfigError("need at least 2 users per community");
    if (classes < 2) throw ConfigError("classes must be >= 2");
    if (links_per_class < 1) throw ConfigError("links-per-class must be >= 1");
    if (posts_min < 1 || posts_max < posts_min) throw ConfigError("invalid posts-per-link range");
    if (comments_min < 0 || comments_max < comments_min)
        throw ConfigError("invalid comments-per-post range");
    if (intra_prob < 0.0 || intra_prob > 1.0) throw ConfigError("intra-prob must be in [0,1]");
    if (nested_reply_prob < 0.0 || nested_reply_prob > 1.0)
        throw ConfigError("nested-reply-prob must be in [0,1]");
    if (mixture_dominance < 0.0 || mixture_dominance > 1.0)
        throw ConfigError("mixture-dominance must be in [0,1]");
    if (mode == SignalMode::order && classes > communities)
        throw ConfigError("mode=order needs classes <= communities (one community order per class)");
}

std::vector<int> class_community_order(int cls, int communities) {
    std::vector<int> order(communities);
    for (int k = 0; k < communities; ++k) order[k] = (k + cls) % communities;
    return order;
}

std::string synth_user_id(int index) { return fmt_id("u%05d", index); }

SynthCorpus generate_synthetic(const SynthConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const int k = cfg.communities;

    SynthCorpus corpus;
    std::vector<int> perm(cfg.users);
    std::iota(perm.begin(), perm.end(), 0);
    Rng community_rng(derive_seed({seed, kCommunityStream}));
    community_rng.shuffle(std::span<int>(perm));
    corpus.user_community.assign(cfg.users, 0);
    std::vector<std::vector<int>> pools(k);
    for (int i = 0; i < cfg.users; ++i) {
        corpus.user_community[perm[i]] = i % k;
        pools[i % k].push_back(perm[i]);
    }
    for (auto& pool : pools) std::sort(pool.begin(), pool.end());

    const int num_links = cfg.classes * cfg.links_per_class;
    std::vector<std::vector<PostEvent>> link_posts(num_links);
    std::vector<std::vector<CommentEvent>> link_comments(num_links);

    parallel_for(static_cast<std::size_t>(num_links), [&](std::size_t link) {
        const int l = static_cast<int>(link);
        const int cls = l / cfg.links_per_class;
        const int j = l % cfg.links_per_class;
        const auto shape = link_structure(cfg, seed, j);
        Rng rng(derive_seed({seed, kIdentityStream, static_cast<std::uint64_t>(cls),
                             static_cast<std::uint64_t>(j)}));

        // Time order of canonical posts.
        std::vector<int> timeline;
        if (cfg.mode == SignalMode::order) {
            for (int block : class_community_order(cls, k))
                for (int p = 0; p < static_cast<int>(shape.size()); ++p)
                    if (shape[p].block == block) timeline.push_back(p);
        } else {
            timeline.resize(shape.size());
            std::iota(timeline.begin(), timeline.end(), 0);
        }

        const auto weights = mixture_weights(cfg, cls);
        auto pick_user = [&](int community, int avoid) {
            const auto& pool = pools[community];
            int u = pool[rng.index(pool.size())];
            for (int tries = 0; u == avoid && tries < 8; ++tries) u = pool[rng.index(pool.size())];
            return u;
        };

        const std::string link_id = fmt_id("link%05d", l);
        std::int64_t t = kEpoch + rng.range(0, 86400 * 365);
        for (int seq = 0; seq < static_cast<int>(timeline.size()); ++seq) {
            const PostShape& post = shape[timeline[seq]];
            const int post_comm = cfg.mode == SignalMode::order
                                      ? post.block
                                      : static_cast<int>(rng.categorical(weights));
            const int author = pick_user(post_comm, -1);
            t += 3600 + rng.range(0, 1799);
            const std::string post_id = fmt_id("link%05d_p%02d", l, seq);
            link_posts[l].push_back({post_id, synth_user_id(author), link_id, t});

            std::vector<int> comm_of(post.comments.size());
            std::vector<int> user_of(post.comments.size());
            std::int64_t tc = t;
            for (std::size_t i = 0; i < post.comments.size(); ++i) {
                const auto& cs = post.comments[i];
                const int parent_comm = cs.parent < 0 ? post_comm : comm_of[cs.parent];
                const int parent_user = cs.parent < 0 ? author : user_of[cs.parent];
                comm_of[i] = (parent_comm + cs.offset) % k;
                user_of[i] = pick_user(comm_of[i], parent_user);
                tc += cs.gap;
                const std::string id = fmt_id("link%05d_p%02d_c%03d", l, seq, static_cast<int>(i));
                const std::string parent =
                    cs.parent < 0 ? post_id : fmt_id("link%05d_p%02d_c%03d", l, seq, cs.parent);
                link_comments[l].push_back({id, synth_user_id(user_of[i]), post_id, parent, tc});
            }
        }
    });

    std::vector<PostEvent> posts;
    std::vector<CommentEvent> comments;
    for (int l = 0; l < num_links; ++l) {
        posts.insert(posts.end(), link_posts[l].begin(), link_posts[l].end());
        comments.insert(comments.end(), link_comments[l].begin(), link_comments[l].end());
        corpus.labels.push_back({fmt_id("link%05d", l), l / cfg.links_per_class});
    }
    corpus.events = EventLog(std::move(posts), std::move(comments));
    return corpus;
}

}  // namespace rgnn::ingest
