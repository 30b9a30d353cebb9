#include <rgnn/nn/layers.hpp>

#include <rgnn/core/error.hpp>

#include <algorithm>
#include <cmath>

namespace rgnn::nn {

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Matrix normalize_adjacency(const graphs::WeightedGraph& graph) {
    const std::size_t n = graph.num_nodes();
    Vector deg(n, 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& nb : graph.neighbors(i)) deg[i] += static_cast<double>(nb.weight);
    // a_ij / sqrt(d_i d_j): symmetric bit for bit, exact on small integer cases
    Matrix adj(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        adj(i, i) = 1.0 / deg[i];
        for (const auto& nb : graph.neighbors(i))
            adj(i, nb.index) = static_cast<double>(nb.weight) / std::sqrt(deg[i] * deg[nb.index]);
    }
    return adj;
}

Matrix gcn_layer(const Matrix& adj, const Matrix& h, const Matrix& w, GcnCache* cache) {
    if (adj.rows() != adj.cols() || adj.cols() != h.rows() || h.cols() != w.rows())
        throw DimensionError("gcn_layer: incompatible shapes");
    Matrix propagated = matmul(adj, h);
    Matrix pre = matmul(propagated, w);
    Matrix out = pre;
    for (double& v : out.data()) v = v < 0.0 ? 0.0 : v;  // NaN passes through
    if (cache) {
        cache->propagated = std::move(propagated);
        cache->pre = std::move(pre);
    }
    return out;
}

GcnGrads gcn_layer_backward(const Matrix& adj, const Matrix& w, const GcnCache& cache,
                            const Matrix& dout, bool input_grad) {
    if (dout.rows() != cache.pre.rows() || dout.cols() != cache.pre.cols())
        throw DimensionError("gcn_layer_backward: gradient shape mismatch");
    Matrix dpre = dout;
    for (std::size_t i = 0; i < dpre.size(); ++i)
        if (!(cache.pre.data()[i] > 0.0)) dpre.data()[i] = 0.0;
    GcnGrads g;
    g.dw = matmul_tn(cache.propagated, dpre);
    // adj is symmetric, so adj^T * dpre * w^T == adj * dpre * w^T.
    if (input_grad) g.dh = matmul(adj, matmul_nt(dpre, w));
    return g;
}

SoftmaxXent softmax_cross_entropy(std::span<const double> logits, int label) {
    if (label < 0 || static_cast<std::size_t>(label) >= logits.size())
        throw Error("softmax_cross_entropy: label " + std::to_string(label) + " out of range [0, " +
                    std::to_string(logits.size()) + ")");
    const double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    Vector p(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        sum += p[i];
    }
    SoftmaxXent out;
    out.loss = -(logits[label] - mx - std::log(sum));
    for (double& v : p) v /= sum;
    p[label] -= 1.0;
    out.grad = std::move(p);
    return out;
}

}  // namespace rgnn::nn
