#include <rgnn/nn/gru.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/nn/layers.hpp>

#include <cmath>

namespace rgnn::nn {

GruParams GruParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
    GruParams p;
    for (Matrix* w : {&p.wz, &p.wr, &p.wh}) *w = Matrix(hidden_dim, input_dim);
    for (Matrix* u : {&p.uz, &p.ur, &p.uh}) *u = Matrix(hidden_dim, hidden_dim);
    for (Matrix* b : {&p.bz, &p.br, &p.bh}) *b = Matrix(hidden_dim, 1);
    return p;
}

Vector gru_cell(std::span<const double> x, std::span<const double> h_prev, const GruParams& p,
                GruStep* cache) {
    const std::size_t s = p.hidden_dim();
    if (x.size() != p.input_dim() || h_prev.size() != s)
        throw DimensionError("gru_cell: input " + std::to_string(x.size()) + "/hidden " +
                             std::to_string(h_prev.size()) + " do not match params " +
                             std::to_string(p.input_dim()) + "/" + std::to_string(s));

    Vector z(p.bz.data().begin(), p.bz.data().end());
    matvec_acc(p.wz, x, z);
    matvec_acc(p.uz, h_prev, z);
    Vector r(p.br.data().begin(), p.br.data().end());
    matvec_acc(p.wr, x, r);
    matvec_acc(p.ur, h_prev, r);
    for (std::size_t i = 0; i < s; ++i) {
        z[i] = sigmoid(z[i]);
        r[i] = sigmoid(r[i]);
    }
    Vector rh(s);
    for (std::size_t i = 0; i < s; ++i) rh[i] = r[i] * h_prev[i];
    Vector cand(p.bh.data().begin(), p.bh.data().end());
    matvec_acc(p.wh, x, cand);
    matvec_acc(p.uh, rh, cand);
    Vector h(s);
    for (std::size_t i = 0; i < s; ++i) {
        cand[i] = std::tanh(cand[i]);
        h[i] = (1.0 - z[i]) * h_prev[i] + z[i] * cand[i];
    }
    if (cache) {
        cache->x.assign(x.begin(), x.end());
        cache->h_prev.assign(h_prev.begin(), h_prev.end());
        cache->z = z;
        cache->r = std::move(r);
        cache->cand = std::move(cand);
        cache->h = h;
    }
    return h;
}

void gru_cell_backward(const GruParams& p, const GruStep& step, std::span<const double> dh,
                       GruParams& grads, Vector& dx, Vector& dh_prev) {
    const std::size_t s = p.hidden_dim();
    if (dh.size() != s) throw DimensionError("gru_cell_backward: gradient size mismatch");
    dx.assign(p.input_dim(), 0.0);
    dh_prev.assign(s, 0.0);

    Vector da_z(s), da_h(s), rh(s);
    for (std::size_t i = 0; i < s; ++i) {
        const double z = step.z[i];
        dh_prev[i] = dh[i] * (1.0 - z);
        da_z[i] = dh[i] * (step.cand[i] - step.h_prev[i]) * z * (1.0 - z);
        da_h[i] = dh[i] * z * (1.0 - step.cand[i] * step.cand[i]);
        rh[i] = step.r[i] * step.h_prev[i];
    }

    add_outer(grads.wh, da_h, step.x);
    add_outer(grads.uh, da_h, rh);
    for (std::size_t i = 0; i < s; ++i) grads.bh.data()[i] += da_h[i];
    matvec_t_acc(p.wh, da_h, dx);
    Vector drh = matvec_t(p.uh, da_h);

    Vector da_r(s);
    for (std::size_t i = 0; i < s; ++i) {
        dh_prev[i] += drh[i] * step.r[i];
        da_r[i] = drh[i] * step.h_prev[i] * step.r[i] * (1.0 - step.r[i]);
    }

    add_outer(grads.wr, da_r, step.x);
    add_outer(grads.ur, da_r, step.h_prev);
    for (std::size_t i = 0; i < s; ++i) grads.br.data()[i] += da_r[i];
    matvec_t_acc(p.wr, da_r, dx);
    matvec_t_acc(p.ur, da_r, dh_prev);

    add_outer(grads.wz, da_z, step.x);
    add_outer(grads.uz, da_z, step.h_prev);
    for (std::size_t i = 0; i < s; ++i) grads.bz.data()[i] += da_z[i];
    matvec_t_acc(p.wz, da_z, dx);
    matvec_t_acc(p.uz, da_z, dh_prev);
}

}  // namespace rgnn::nn
