#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rgnn::nn {

struct BlockSpan {
    std::string name;
    std::size_t offset;
    std::size_t size;
};

struct GradCheckReport {
    /// max over entries of |g_a - g_n| / max(1e-8, |g_a| + |g_n|)
    double max_rel_error = 0.0;
    std::size_t count = 0;
    std::vector<std::pair<std::string, double>> block_errors;
    bool passed = true;
};

using LossClosure = std::function<double(std::span<const double>)>;

/// Compares `analytic` to central differences of `loss` around `point`.
/// When `blocks` is empty, the whole vector is one block named "params".
GradCheckReport grad_check(const LossClosure& loss, std::span<const double> point,
                           std::span<const double> analytic, double eps, double tolerance,
                           std::span<const BlockSpan> blocks = {});

}  // namespace rgnn::nn
