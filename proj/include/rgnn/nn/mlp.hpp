#pragma once

#include <rgnn/nn/matrix.hpp>

#include <span>
#include <string>
#include <vector>

namespace rgnn::nn {

/// Affine layers with ReLU between them; the last layer is linear.
/// weights[i] is (out x in), biases[i] is (out x 1).
struct MlpParams {
    std::vector<Matrix> weights;
    std::vector<Matrix> biases;

    static MlpParams zeros(std::size_t input_dim, std::span<const int> hidden, std::size_t output_dim);

    std::size_t input_dim() const { return weights.empty() ? 0 : weights.front().cols(); }
    std::size_t output_dim() const { return weights.empty() ? 0 : weights.back().rows(); }

    template <class F>
    void for_each_block(F&& f) {
        for (std::size_t i = 0; i < weights.size(); ++i) {
            f(std::to_string(i) + ".w", weights[i]);
            f(std::to_string(i) + ".b", biases[i]);
        }
    }
    template <class F>
    void for_each_block(F&& f) const {
        for (std::size_t i = 0; i < weights.size(); ++i) {
            f(std::to_string(i) + ".w", weights[i]);
            f(std::to_string(i) + ".b", biases[i]);
        }
    }
};

struct MlpCache {
    std::vector<Vector> inputs;  ///< input to each layer
    std::vector<Vector> pre;     ///< pre-activation of each layer
};

Vector mlp_forward(std::span<const double> x, const MlpParams& p, MlpCache* cache = nullptr);

/// Accumulates into `grads`; returns d(input).
Vector mlp_backward(const MlpParams& p, const MlpCache& cache, std::span<const double> dout,
                    MlpParams& grads);

}  // namespace rgnn::nn
