#include <rgnn/embed/sgns.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/core/rng.hpp>

#include <algorithm>
#include <cmath>

namespace rgnn::embed {

namespace {

constexpr std::uint64_t kInitStream = 0x494e4954;
constexpr std::uint64_t kNegativeStream = 0x4e454753;

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// -log sigmoid(x), stable for large |x|.
double neg_log_sigmoid(double x) {
    return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

std::vector<std::uint32_t> build_negative_table(const std::vector<Walk>& walks,
                                                std::size_t vocab_size, std::size_t table_size) {
    std::vector<double> freq(vocab_size, 0.0);
    for (const auto& w : walks)
        for (auto v : w) freq[v] += 1.0;
    double total = 0.0;
    for (double& f : freq) {
        f = std::pow(f, 0.75);
        total += f;
    }
    std::vector<std::uint32_t> table;
    table.reserve(table_size);
    if (total <= 0.0) return table;
    std::size_t word = 0;
    double cum = freq[0] / total;
    for (std::size_t i = 0; i < table_size; ++i) {
        table.push_back(static_cast<std::uint32_t>(word));
        if (static_cast<double>(i + 1) / static_cast<double>(table_size) > cum && word + 1 < vocab_size) {
            ++word;
            cum += freq[word] / total;
        }
    }
    return table;
}

}  // namespace

void SgnsConfig::validate() const {
    if (dim < 2) throw ConfigError("embedding dim must be >= 2");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (negatives < 1) throw ConfigError("negatives must be >= 1");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (!(lr > 0.0) || lr_floor < 0.0) throw ConfigError("invalid SGNS learning rate");
    if (table_size < 1) throw ConfigError("negative table size must be >= 1");
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> positive_pairs(std::span<const std::uint32_t> walk,
                                                                     int window) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    const auto n = static_cast<std::ptrdiff_t>(walk.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + window);
        for (std::ptrdiff_t j = lo; j <= hi; ++j)
            if (j != i) pairs.emplace_back(walk[i], walk[j]);
    }
    return pairs;
}

std::vector<double> initial_center_vectors(std::size_t vocab_size, const SgnsConfig& cfg) {
    Rng rng(derive_seed({cfg.seed, kInitStream}));
    const double half = 0.5 / cfg.dim;
    std::vector<double> v(vocab_size * cfg.dim);
    for (double& x : v) x = rng.uniform(-half, half);
    return v;
}

SgnsResult train_sgns(const std::vector<Walk>& walks, const SgnsConfig& cfg,
                      std::span<const UserId> vocab) {
    cfg.validate();
    const std::size_t n = vocab.size();
    const std::size_t d = static_cast<std::size_t>(cfg.dim);
    std::vector<double> center = initial_center_vectors(n, cfg);
    std::vector<double> context(n * d, 0.0);

    SgnsResult result;
    const auto table = build_negative_table(walks, n, cfg.table_size);

    std::size_t pairs_per_epoch = 0;
    for (const auto& w : walks) {
        const std::size_t len = w.size();
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t lo = i >= static_cast<std::size_t>(cfg.window) ? i - cfg.window : 0;
            const std::size_t hi = std::min(len - 1, i + cfg.window);
            pairs_per_epoch += hi - lo;
        }
    }
    const double total_pairs = static_cast<double>(pairs_per_epoch) * cfg.epochs;

    Rng rng(derive_seed({cfg.seed, kNegativeStream}));
    std::vector<double> grad_center(d);
    double processed = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss = 0.0;
        std::size_t count = 0;
        for (const auto& walk : walks) {
            for (const auto& [c, ctx] : positive_pairs(walk, cfg.window)) {
                const double lr = std::max(cfg.lr_floor, cfg.lr * (1.0 - processed / total_pairs));
                processed += 1.0;
                double* u = center.data() + static_cast<std::size_t>(c) * d;
                std::fill(grad_center.begin(), grad_center.end(), 0.0);
                for (int k = 0; k <= cfg.negatives; ++k) {
                    std::uint32_t target;
                    double label;
                    if (k == 0) {
                        target = ctx;
                        label = 1.0;
                    } else {
                        if (table.empty()) break;
                        target = table[rng.index(table.size())];
                        if (target == ctx) continue;
                        label = 0.0;
                    }
                    double* v = context.data() + static_cast<std::size_t>(target) * d;
                    double dot = 0.0;
                    for (std::size_t i = 0; i < d; ++i) dot += u[i] * v[i];
                    loss += label > 0.5 ? neg_log_sigmoid(dot) : neg_log_sigmoid(-dot);
                    const double g = lr * (label - sigmoid(dot));
                    for (std::size_t i = 0; i < d; ++i) {
                        grad_center[i] += g * v[i];
                        v[i] += g * u[i];
                    }
                }
                for (std::size_t i = 0; i < d; ++i) u[i] += grad_center[i];
                ++count;
            }
        }
        result.epoch_loss.push_back(count ? loss / static_cast<double>(count) : 0.0);
    }

    result.table = EmbeddingTable({vocab.begin(), vocab.end()}, d, std::move(center));
    return result;
}

SgnsResult node2vec(const graphs::WeightedGraph& graph, const WalkConfig& walk_cfg,
                    const SgnsConfig& sgns_cfg) {
    const auto walks = sample_walks(graph, walk_cfg);
    return train_sgns(walks, sgns_cfg, graph.users());
}

}  // namespace rgnn::embed
