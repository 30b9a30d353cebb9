#include <rgnn/model/model.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/core/parallel.hpp>
#include <rgnn/nn/layers.hpp>

#include <algorithm>

namespace rgnn::model {

namespace {

void copy_row(nn::Matrix& m, std::size_t r, std::span<const double> v) {
    std::copy(v.begin(), v.end(), m.row(r).begin());
}

std::size_t post_count(const LinkSample& sample, const Hyperparams& hp) {
    return std::min(sample.posts.size(), static_cast<std::size_t>(hp.max_posts));
}

struct PostTrace {
    nn::GcnCache layer1;
    nn::GcnCache layer2;
    nn::Matrix h1;
    std::size_t nodes = 0;
};

nn::Vector encode_traced(const PreparedPost& post, const ModelParams& params, PostTrace* trace) {
    nn::GcnCache c1, c2;
    nn::Matrix h1 = nn::gcn_layer(post.adj, post.features, params.gcn_w1, trace ? &c1 : nullptr);
    nn::Matrix h2 = nn::gcn_layer(post.adj, h1, params.gcn_w2, trace ? &c2 : nullptr);
    const std::size_t n = h2.rows();
    nn::Vector v(h2.cols(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = h2.row(i);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += r[j];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& x : v) x *= inv;
    if (trace) {
        trace->layer1 = std::move(c1);
        trace->layer2 = std::move(c2);
        trace->h1 = std::move(h1);
        trace->nodes = n;
    }
    return v;
}

void check_input_dim(const PreparedSample& sample, const ModelParams& params) {
    if (sample.variant != params.variant)
        throw ConfigError(std::string("sample prepared for ") + to_string(sample.variant) +
                          " but params are " + to_string(params.variant));
    const std::size_t d = sample.variant == Variant::rgnn
                              ? (sample.posts.empty() ? 0 : sample.posts.front().features.cols())
                              : sample.sequence.cols();
    if (d != params.input_dim())
        throw DimensionError("feature dimension " + std::to_string(d) + " does not match model input " +
                             std::to_string(params.input_dim()));
}

}  // namespace

std::span<const double> UserFeatureSource::lookup(const UserId& user) const {
    auto row = table_->find(user);
    return row.empty() ? std::span<const double>(zero_) : row;
}

PreparedSample prepare_sample(const LinkSample& sample, const UserFeatureSource& features,
                              const Hyperparams& hp, Variant variant) {
    if (sample.posts.empty()) throw Error("link " + sample.link_id + " has no posts");
    PreparedSample out;
    out.variant = variant;
    out.label = sample.label;
    const std::size_t d = features.dim();
    const std::size_t num_posts = post_count(sample, hp);
    const auto max_commenters = static_cast<std::size_t>(hp.max_commenters);

    switch (variant) {
        case Variant::rgnn: {
            out.posts.reserve(num_posts);
            for (std::size_t t = 0; t < num_posts; ++t) {
                const auto& post = sample.posts[t];
                const auto graph = post.reply_graph.prefix(max_commenters + 1);
                PreparedPost pp;
                pp.adj = nn::normalize_adjacency(graph);
                pp.features = nn::Matrix(graph.num_nodes(), d);
                for (std::size_t i = 0; i < graph.num_nodes(); ++i)
                    copy_row(pp.features, i, features.lookup(graph.user(i)));
                out.posts.push_back(std::move(pp));
            }
            break;
        }
        case Variant::noreply: {
            std::vector<const UserId*> seq;
            for (std::size_t t = 0; t < num_posts; ++t) {
                const auto& post = sample.posts[t];
                seq.push_back(&post.author);
                const std::size_t k = std::min(post.commenters.size(), max_commenters);
                for (std::size_t i = 0; i < k; ++i) seq.push_back(&post.commenters[i]);
            }
            out.sequence = nn::Matrix(seq.size(), d);
            for (std::size_t i = 0; i < seq.size(); ++i) copy_row(out.sequence, i, features.lookup(*seq[i]));
            break;
        }
        case Variant::traceminer: {
            out.sequence = nn::Matrix(num_posts, d);
            for (std::size_t t = 0; t < num_posts; ++t)
                copy_row(out.sequence, t, features.lookup(sample.posts[t].author));
            break;
        }
    }
    return out;
}

std::vector<PreparedSample> prepare_samples(std::span<const LinkSample> samples,
                                            const UserFeatureSource& features,
                                            const Hyperparams& hp, Variant variant) {
    std::vector<PreparedSample> out(samples.size());
    parallel_for(samples.size(),
                 [&](std::size_t i) { out[i] = prepare_sample(samples[i], features, hp, variant); });
    return out;
}

nn::Vector encode_post(const PreparedPost& post, const ModelParams& params) {
    return encode_traced(post, params, nullptr);
}

nn::Vector encode_post(const PostView& post, const UserFeatureSource& features,
                       const ModelParams& params, const Hyperparams& hp) {
    LinkSample one;
    one.posts.push_back(post);
    Hyperparams single = hp;
    single.max_posts = 1;
    const auto prepared = prepare_sample(one, features, single, Variant::rgnn);
    return encode_post(prepared.posts.front(), params);
}

nn::Vector forward(const PreparedSample& sample, const ModelParams& params) {
    check_input_dim(sample, params);
    nn::Vector h(params.gru.hidden_dim(), 0.0);
    if (sample.variant == Variant::rgnn) {
        for (const auto& post : sample.posts) h = nn::gru_cell(encode_post(post, params), h, params.gru);
    } else {
        for (std::size_t t = 0; t < sample.sequence.rows(); ++t)
            h = nn::gru_cell(sample.sequence.row(t), h, params.gru);
    }
    return nn::mlp_forward(h, params.mlp);
}

nn::Vector rgnn_forward(const LinkSample& sample, const UserFeatureSource& features,
                        const ModelParams& params, const Hyperparams& hp) {
    return forward(prepare_sample(sample, features, hp, Variant::rgnn), params);
}

nn::Vector rgnn_noreply_forward(const LinkSample& sample, const UserFeatureSource& features,
                                const ModelParams& params, const Hyperparams& hp) {
    return forward(prepare_sample(sample, features, hp, Variant::noreply), params);
}

nn::Vector traceminer_forward(const LinkSample& sample, const UserFeatureSource& features,
                              const ModelParams& params, const Hyperparams& hp) {
    return forward(prepare_sample(sample, features, hp, Variant::traceminer), params);
}

int predict(std::span<const double> logits) {
    if (logits.empty()) throw Error("predict: empty logits");
    return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

double sample_loss_and_grads(const PreparedSample& sample, const ModelParams& params,
                             ModelParams& grads) {
    check_input_dim(sample, params);
    const bool graph = sample.variant == Variant::rgnn;
    const std::size_t steps = graph ? sample.posts.size() : sample.sequence.rows();

    std::vector<PostTrace> traces(graph ? steps : 0);
    std::vector<nn::GruStep> gru_steps(steps);
    nn::Vector h(params.gru.hidden_dim(), 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        if (graph) {
            const nn::Vector v = encode_traced(sample.posts[t], params, &traces[t]);
            h = nn::gru_cell(v, h, params.gru, &gru_steps[t]);
        } else {
            h = nn::gru_cell(sample.sequence.row(t), h, params.gru, &gru_steps[t]);
        }
    }
    nn::MlpCache mlp_cache;
    const nn::Vector logits = nn::mlp_forward(h, params.mlp, &mlp_cache);
    const auto xent = nn::softmax_cross_entropy(logits, sample.label);

    nn::Vector dh = nn::mlp_backward(params.mlp, mlp_cache, xent.grad, grads.mlp);
    nn::Vector dx, dh_prev;
    for (std::size_t t = steps; t-- > 0;) {
        nn::gru_cell_backward(params.gru, gru_steps[t], dh, grads.gru, dx, dh_prev);
        dh.swap(dh_prev);
        if (!graph) continue;

        const auto& post = sample.posts[t];
        const auto& trace = traces[t];
        nn::Matrix dh2(trace.nodes, dx.size());
        const double inv = 1.0 / static_cast<double>(trace.nodes);
        for (std::size_t i = 0; i < trace.nodes; ++i)
            for (std::size_t j = 0; j < dx.size(); ++j) dh2(i, j) = dx[j] * inv;
        auto g2 = nn::gcn_layer_backward(post.adj, params.gcn_w2, trace.layer2, dh2);
        grads.gcn_w2 += g2.dw;
        auto g1 = nn::gcn_layer_backward(post.adj, params.gcn_w1, trace.layer1, g2.dh, false);
        grads.gcn_w1 += g1.dw;
    }
    return xent.loss;
}

}  // namespace rgnn::model
