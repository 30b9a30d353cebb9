#include <rgnn/nn/mlp.hpp>

#include <rgnn/core/error.hpp>

namespace rgnn::nn {

MlpParams MlpParams::zeros(std::size_t input_dim, std::span<const int> hidden, std::size_t output_dim) {
    MlpParams p;
    std::size_t in = input_dim;
    for (int h : hidden) {
        p.weights.emplace_back(static_cast<std::size_t>(h), in);
        p.biases.emplace_back(static_cast<std::size_t>(h), 1);
        in = static_cast<std::size_t>(h);
    }
    p.weights.emplace_back(output_dim, in);
    p.biases.emplace_back(output_dim, 1);
    return p;
}

Vector mlp_forward(std::span<const double> x, const MlpParams& p, MlpCache* cache) {
    if (p.weights.empty()) throw DimensionError("mlp_forward: no layers");
    if (x.size() != p.input_dim())
        throw DimensionError("mlp_forward: input " + std::to_string(x.size()) + " vs " +
                             std::to_string(p.input_dim()));
    if (cache) {
        cache->inputs.clear();
        cache->pre.clear();
    }
    Vector cur(x.begin(), x.end());
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        Vector pre(p.biases[l].data().begin(), p.biases[l].data().end());
        matvec_acc(p.weights[l], cur, pre);
        if (cache) {
            cache->inputs.push_back(cur);
            cache->pre.push_back(pre);
        }
        if (l + 1 < p.weights.size())
            for (double& v : pre) v = v < 0.0 ? 0.0 : v;
        cur = std::move(pre);
    }
    return cur;
}

Vector mlp_backward(const MlpParams& p, const MlpCache& cache, std::span<const double> dout,
                    MlpParams& grads) {
    Vector d(dout.begin(), dout.end());
    for (std::size_t l = p.weights.size(); l-- > 0;) {
        if (l + 1 < p.weights.size())
            for (std::size_t i = 0; i < d.size(); ++i)
                if (!(cache.pre[l][i] > 0.0)) d[i] = 0.0;
        add_outer(grads.weights[l], d, cache.inputs[l]);
        for (std::size_t i = 0; i < d.size(); ++i) grads.biases[l].data()[i] += d[i];
        d = matvec_t(p.weights[l], d);
    }
    return d;
}

}  // namespace rgnn::nn
