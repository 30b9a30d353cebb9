#pragma once

#include <rgnn/embed/embedding_table.hpp>
#include <rgnn/ingest/dataset.hpp>
#include <rgnn/nn/checkpoint.hpp>
#include <rgnn/nn/gradcheck.hpp>
#include <rgnn/nn/gru.hpp>
#include <rgnn/nn/matrix.hpp>
#include <rgnn/nn/mlp.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rgnn::model {

using ingest::LinkSample;
using ingest::PostView;
using ingest::UserId;

enum class Variant {
    rgnn,        ///< GCN post encoder -> GRU over posts -> MLP
    noreply,     ///< GRU over [author, commenters...] of every post -> MLP
    traceminer,  ///< GRU over post authors -> MLP
};

const char* to_string(Variant v);
Variant variant_from_string(std::string_view name);

struct Hyperparams {
    int gcn_hidden = 64;
    int rnn_hidden = 64;
    std::vector<int> mlp_hidden{64};
    int max_posts = 32;
    int max_commenters = 64;
    double lr = 5e-3;
    int batch_size = 16;
    int epochs = 30;
    std::uint64_t seed = 1;

    void validate() const;
};

/// All trainable weights. Shape chain (rgnn):
///   d -> gcn_w1 (d x h) -> gcn_w2 (h x h) -> GRU(h -> s) -> MLP(s -> ... -> C).
/// noreply / traceminer have no GCN blocks and a GRU with input d.
struct ModelParams {
    Variant variant = Variant::rgnn;
    nn::Matrix gcn_w1;
    nn::Matrix gcn_w2;
    nn::GruParams gru;
    nn::MlpParams mlp;

    /// Visits blocks in the canonical flat-view order.
    template <class F>
    void for_each_block(F&& f) {
        if (variant == Variant::rgnn) {
            f(std::string("gcn.w1"), gcn_w1);
            f(std::string("gcn.w2"), gcn_w2);
        }
        gru.for_each_block([&](std::string_view n, nn::Matrix& m) { f("gru." + std::string(n), m); });
        mlp.for_each_block([&](const std::string& n, nn::Matrix& m) { f("mlp." + n, m); });
    }
    template <class F>
    void for_each_block(F&& f) const {
        const_cast<ModelParams*>(this)->for_each_block(
            [&](const std::string& n, nn::Matrix& m) { f(n, static_cast<const nn::Matrix&>(m)); });
    }

    std::size_t size() const;
    std::size_t input_dim() const { return variant == Variant::rgnn ? gcn_w1.rows() : gru.input_dim(); }
    std::size_t num_classes() const { return mlp.output_dim(); }

    ModelParams zeros_like() const;
    ModelParams& operator+=(const ModelParams& other);
    ModelParams& operator*=(double s);

    bool operator==(const ModelParams&) const;
};

/// Matrices uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
ModelParams init_params(Variant variant, std::size_t embed_dim, std::size_t num_classes,
                        const Hyperparams& hp);

std::vector<double> flatten(const ModelParams& p);
void unflatten(std::span<const double> flat, ModelParams& p);
std::vector<nn::BlockSpan> block_layout(const ModelParams& p);

nn::ParamContainer to_container(const ModelParams& p);
/// Rebuilds params of `variant` from a container, validating the shape chain.
ModelParams from_container(const nn::ParamContainer& c, Variant variant);

/// Embedding lookup that resolves unknown users to the zero vector.
class UserFeatureSource {
public:
    explicit UserFeatureSource(const embed::EmbeddingTable& table)
        : table_(&table), zero_(table.dim(), 0.0) {}

    std::size_t dim() const noexcept { return table_->dim(); }
    std::span<const double> lookup(const UserId& user) const;

private:
    const embed::EmbeddingTable* table_;
    std::vector<double> zero_;
};

/// A post ready for the GCN: normalized adjacency and node features, after
/// truncation to the author plus the first max_commenters commenters.
struct PreparedPost {
    nn::Matrix adj;
    nn::Matrix features;
};

/// A link converted into the numeric inputs of one variant. Building these
/// once keeps feature lookups and normalization out of the training loop.
struct PreparedSample {
    Variant variant = Variant::rgnn;
    int label = 0;
    std::vector<PreparedPost> posts;  ///< rgnn only
    nn::Matrix sequence;              ///< noreply / traceminer: one row per RNN step
};

PreparedSample prepare_sample(const LinkSample& sample, const UserFeatureSource& features,
                              const Hyperparams& hp, Variant variant);
std::vector<PreparedSample> prepare_samples(std::span<const LinkSample> samples,
                                            const UserFeatureSource& features,
                                            const Hyperparams& hp, Variant variant);

/// Two GCN layers over the post's reply graph, then the column mean.
nn::Vector encode_post(const PostView& post, const UserFeatureSource& features,
                       const ModelParams& params, const Hyperparams& hp);
nn::Vector encode_post(const PreparedPost& post, const ModelParams& params);

nn::Vector forward(const PreparedSample& sample, const ModelParams& params);

nn::Vector rgnn_forward(const LinkSample& sample, const UserFeatureSource& features,
                        const ModelParams& params, const Hyperparams& hp);
nn::Vector rgnn_noreply_forward(const LinkSample& sample, const UserFeatureSource& features,
                                const ModelParams& params, const Hyperparams& hp);
nn::Vector traceminer_forward(const LinkSample& sample, const UserFeatureSource& features,
                              const ModelParams& params, const Hyperparams& hp);

/// Smallest index attaining the maximum.
int predict(std::span<const double> logits);

/// Cross-entropy of one sample; accumulates its gradient into `grads`.
double sample_loss_and_grads(const PreparedSample& sample, const ModelParams& params,
                             ModelParams& grads);

struct LossAndGrads {
    double loss = 0.0;  ///< mean over the batch
    ModelParams grads;  ///< mean over the batch
};

/// Per-sample gradients are computed in parallel and summed in batch order,
/// so the result is bitwise independent of thread count.
LossAndGrads loss_and_grads(std::span<const PreparedSample> batch, const ModelParams& params);
/// Same, over the subset `indices` of `samples` (in index order).
LossAndGrads loss_and_grads(std::span<const PreparedSample> samples, std::span<const std::size_t> indices,
                            const ModelParams& params);
/// Serial reference for loss_and_grads.
LossAndGrads loss_and_grads_serial(std::span<const PreparedSample> batch, const ModelParams& params);

/// Convenience entry point over raw samples returning the flat gradient.
std::pair<double, std::vector<double>> loss_and_grads(std::span<const LinkSample> batch,
                                                      const UserFeatureSource& features,
                                                      const ModelParams& params,
                                                      const Hyperparams& hp);

/// Logits for many samples (parallel over samples).
std::vector<nn::Vector> forward_all(std::span<const PreparedSample> samples, const ModelParams& params);

}  // namespace rgnn::model
