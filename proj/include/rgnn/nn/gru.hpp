#pragma once

#include <rgnn/nn/matrix.hpp>

#include <span>
#include <string_view>

namespace rgnn::nn {

/// Gated recurrent unit:
///   z  = sigmoid(wz x + uz h + bz)
///   r  = sigmoid(wr x + ur h + br)
///   c  = tanh(wh x + uh (r * h) + bh)
///   h' = (1 - z) * h + z * c
struct GruParams {
    Matrix wz, uz, bz;
    Matrix wr, ur, br;
    Matrix wh, uh, bh;

    static GruParams zeros(std::size_t input_dim, std::size_t hidden_dim);

    std::size_t input_dim() const noexcept { return wz.cols(); }
    std::size_t hidden_dim() const noexcept { return wz.rows(); }

    template <class F>
    void for_each_block(F&& f) {
        f(std::string_view("wz"), wz); f(std::string_view("uz"), uz); f(std::string_view("bz"), bz);
        f(std::string_view("wr"), wr); f(std::string_view("ur"), ur); f(std::string_view("br"), br);
        f(std::string_view("wh"), wh); f(std::string_view("uh"), uh); f(std::string_view("bh"), bh);
    }
    template <class F>
    void for_each_block(F&& f) const {
        const_cast<GruParams*>(this)->for_each_block(
            [&](std::string_view name, Matrix& m) { f(name, static_cast<const Matrix&>(m)); });
    }
};

/// Per-step intermediates for backpropagation through time.
struct GruStep {
    Vector x, h_prev, z, r, cand, h;
};

Vector gru_cell(std::span<const double> x, std::span<const double> h_prev, const GruParams& p,
                GruStep* cache = nullptr);

/// Accumulates parameter gradients into `grads` and returns (dx, dh_prev)
/// through the out-parameters, overwriting them.
void gru_cell_backward(const GruParams& p, const GruStep& step, std::span<const double> dh,
                       GruParams& grads, Vector& dx, Vector& dh_prev);

}  // namespace rgnn::nn
