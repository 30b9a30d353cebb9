#include <rgnn/model/model.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/core/rng.hpp>

#include <cmath>

namespace rgnn::model {

namespace {

constexpr std::uint64_t kInitStream = 0x504152414d;

void glorot(nn::Matrix& m, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (double& v : m.data()) v = rng.uniform(-limit, limit);
}

}  // namespace

const char* to_string(Variant v) {
    switch (v) {
        case Variant::rgnn: return "rgnn";
        case Variant::noreply: return "noreply";
        case Variant::traceminer: return "traceminer";
    }
    return "?";
}

Variant variant_from_string(std::string_view name) {
    if (name == "rgnn") return Variant::rgnn;
    if (name == "noreply") return Variant::noreply;
    if (name == "traceminer") return Variant::traceminer;
    throw ConfigError("unknown model variant '" + std::string(name) + "'");
}

void Hyperparams::validate() const {
    if (gcn_hidden < 1 || rnn_hidden < 1) throw ConfigError("hidden sizes must be positive");
    for (int h : mlp_hidden)
        if (h < 1) throw ConfigError("mlp hidden sizes must be positive");
    if (max_posts < 1) throw ConfigError("max-posts must be >= 1");
    if (max_commenters < 0) throw ConfigError("max-commenters must be >= 0");
    if (!(lr > 0.0)) throw ConfigError("learning rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch-size must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
}

std::size_t ModelParams::size() const {
    std::size_t n = 0;
    for_each_block([&](const std::string&, const nn::Matrix& m) { n += m.size(); });
    return n;
}

ModelParams ModelParams::zeros_like() const {
    ModelParams z = *this;
    z.for_each_block([](const std::string&, nn::Matrix& m) { m.fill(0.0); });
    return z;
}

ModelParams& ModelParams::operator+=(const ModelParams& other) {
    std::vector<const nn::Matrix*> rhs;
    other.for_each_block([&](const std::string&, const nn::Matrix& m) { rhs.push_back(&m); });
    std::size_t i = 0;
    for_each_block([&](const std::string&, nn::Matrix& m) {
        if (i >= rhs.size()) throw DimensionError("ModelParams += : block count mismatch");
        m += *rhs[i++];
    });
    if (i != rhs.size()) throw DimensionError("ModelParams += : block count mismatch");
    return *this;
}

ModelParams& ModelParams::operator*=(double s) {
    for_each_block([&](const std::string&, nn::Matrix& m) { m *= s; });
    return *this;
}

bool ModelParams::operator==(const ModelParams& other) const {
    return variant == other.variant && flatten(*this) == flatten(other) &&
           block_layout(*this).size() == block_layout(other).size();
}

ModelParams init_params(Variant variant, std::size_t embed_dim, std::size_t num_classes,
                        const Hyperparams& hp) {
    hp.validate();
    if (embed_dim == 0) throw DimensionError("embedding dimension must be positive");
    if (num_classes < 2) throw ConfigError("need at least 2 classes");
    ModelParams p;
    p.variant = variant;
    std::size_t rnn_input = embed_dim;
    if (variant == Variant::rgnn) {
        const auto h = static_cast<std::size_t>(hp.gcn_hidden);
        p.gcn_w1 = nn::Matrix(embed_dim, h);
        p.gcn_w2 = nn::Matrix(h, h);
        rnn_input = h;
    }
    p.gru = nn::GruParams::zeros(rnn_input, static_cast<std::size_t>(hp.rnn_hidden));
    p.mlp = nn::MlpParams::zeros(static_cast<std::size_t>(hp.rnn_hidden), hp.mlp_hidden, num_classes);

    Rng rng(derive_seed({hp.seed, kInitStream, static_cast<std::uint64_t>(variant)}));
    p.for_each_block([&](const std::string& name, nn::Matrix& m) {
        const auto leaf = name.substr(name.rfind('.') + 1);
        if (leaf.front() != 'b') glorot(m, rng);
    });
    return p;
}

std::vector<double> flatten(const ModelParams& p) {
    std::vector<double> flat;
    flat.reserve(p.size());
    p.for_each_block([&](const std::string&, const nn::Matrix& m) {
        flat.insert(flat.end(), m.data().begin(), m.data().end());
    });
    return flat;
}

void unflatten(std::span<const double> flat, ModelParams& p) {
    if (flat.size() != p.size()) throw DimensionError("unflatten: size mismatch");
    std::size_t off = 0;
    p.for_each_block([&](const std::string&, nn::Matrix& m) {
        std::copy(flat.begin() + off, flat.begin() + off + m.size(), m.data().begin());
        off += m.size();
    });
}

std::vector<nn::BlockSpan> block_layout(const ModelParams& p) {
    std::vector<nn::BlockSpan> layout;
    std::size_t off = 0;
    p.for_each_block([&](const std::string& name, const nn::Matrix& m) {
        layout.push_back({name, off, m.size()});
        off += m.size();
    });
    return layout;
}

nn::ParamContainer to_container(const ModelParams& p) {
    nn::ParamContainer c;
    c.metadata.emplace_back("variant", to_string(p.variant));
    p.for_each_block([&](const std::string& name, const nn::Matrix& m) { c.blocks.emplace_back(name, m); });
    return c;
}

ModelParams from_container(const nn::ParamContainer& c, Variant variant) {
    ModelParams p;
    p.variant = variant;
    auto need = [&](const std::string& name) -> const nn::Matrix& {
        const nn::Matrix* m = c.block(name);
        if (!m) throw IntegrityError("checkpoint is missing block " + name);
        return *m;
    };
    if (variant == Variant::rgnn) {
        p.gcn_w1 = need("gcn.w1");
        p.gcn_w2 = need("gcn.w2");
    }
    p.gru.for_each_block([&](std::string_view n, nn::Matrix& m) { m = need("gru." + std::string(n)); });
    for (std::size_t i = 0;; ++i) {
        const nn::Matrix* w = c.block("mlp." + std::to_string(i) + ".w");
        if (!w) break;
        p.mlp.weights.push_back(*w);
        p.mlp.biases.push_back(need("mlp." + std::to_string(i) + ".b"));
    }
    if (p.mlp.weights.empty()) throw IntegrityError("checkpoint has no MLP layers");

    // Shape chain.
    const std::size_t s = p.gru.hidden_dim();
    bool ok = p.gru.uz.rows() == s && p.gru.uz.cols() == s && p.gru.bz.rows() == s;
    if (variant == Variant::rgnn)
        ok = ok && p.gcn_w1.cols() == p.gcn_w2.rows() && p.gcn_w2.cols() == p.gru.input_dim();
    std::size_t in = s;
    for (std::size_t i = 0; i < p.mlp.weights.size(); ++i) {
        ok = ok && p.mlp.weights[i].cols() == in && p.mlp.biases[i].rows() == p.mlp.weights[i].rows();
        in = p.mlp.weights[i].rows();
    }
    if (!ok) throw DimensionError("checkpoint blocks do not form a consistent shape chain");
    if (c.blocks.size() != block_layout(p).size())
        throw IntegrityError("checkpoint has unexpected extra blocks");
    return p;
}

}  // namespace rgnn::model
