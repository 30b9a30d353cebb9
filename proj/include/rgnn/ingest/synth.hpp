#pragma once

#include <rgnn/ingest/events.hpp>
#include <rgnn/ingest/labels.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace rgnn::ingest {

enum class SignalMode {
    /// Every class engages the same multiset of communities; classes differ
    /// only in the temporal order in which communities are engaged.
    order,
    /// Classes differ in community mixture proportions.
    mixture,
};

const char* to_string(SignalMode mode);
SignalMode signal_mode_from_string(const std::string& name);

struct SynthConfig {
    int users = 1000;
    int communities = 4;
    int classes = 4;
    int links_per_class = 125;
    int posts_min = 4;
    int posts_max = 8;
    int comments_min = 2;
    int comments_max = 8;
    SignalMode mode = SignalMode::order;
    /// Probability that a reply partner is drawn from the parent author's community.
    double intra_prob = 0.9;
    /// Probability that a non-first comment replies to an earlier comment
    /// rather than to the post.
    double nested_reply_prob = 0.5;
    /// Mixture mode: share of posts drawn from a class's dominant community.
    double mixture_dominance = 0.7;

    /// Throws ConfigError.
    void validate() const;
};

struct SynthCorpus {
    EventLog events;
    std::vector<LinkRecord> labels;
    /// Community of user `u%05d` at index i.
    std::vector<int> user_community;
};

/// Stochastic-block-model cascade generator. Deterministic given seed; each
/// link draws from its own derived RNG streams, so generation order does not
/// affect output. Comment trees have depth at most 3.
///
/// Link j of every class shares one "structure" stream (post count, block
/// sizes, comment counts, reply tree shape, community offsets); only the
/// class-specific "identity" stream (which concrete users, timestamps,
/// mixture draws) and the class's block order differ.
SynthCorpus generate_synthetic(const SynthConfig& config, std::uint64_t seed);

/// Ordering of communities engaged over a link's lifetime in mode=order.
std::vector<int> class_community_order(int cls, int communities);

std::string synth_user_id(int index);

}  // namespace rgnn::ingest
