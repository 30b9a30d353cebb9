#pragma once

#include <rgnn/graphs/graph.hpp>
#include <rgnn/nn/matrix.hpp>

#include <span>

namespace rgnn::nn {

/// D^{-1/2} (A + I) D^{-1/2}, with A the weighted adjacency of `graph` and
/// D the degree matrix of A + I. Dense; reply graphs are small.
Matrix normalize_adjacency(const graphs::WeightedGraph& graph);

/// Intermediates kept by gcn_layer for the backward pass.
struct GcnCache {
    Matrix propagated;  ///< adj * h
    Matrix pre;         ///< adj * h * w
};

/// ReLU(adj * h * w).
Matrix gcn_layer(const Matrix& adj, const Matrix& h, const Matrix& w, GcnCache* cache = nullptr);

struct GcnGrads {
    Matrix dh;
    Matrix dw;
};

/// Gradients of gcn_layer given d(output). `adj` must be symmetric.
/// With `input_grad = false`, `dh` is left empty.
GcnGrads gcn_layer_backward(const Matrix& adj, const Matrix& w, const GcnCache& cache,
                            const Matrix& dout, bool input_grad = true);

struct SoftmaxXent {
    double loss;
    Vector grad;  ///< softmax(logits) - onehot(label)
};

/// -log softmax(logits)[label], using max-subtraction. Throws on bad label.
SoftmaxXent softmax_cross_entropy(std::span<const double> logits, int label);

double sigmoid(double x);

}  // namespace rgnn::nn
