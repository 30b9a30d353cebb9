#include <rgnn/nn/gradcheck.hpp>

#include <rgnn/core/error.hpp>

#include <algorithm>
#include <cmath>

namespace rgnn::nn {

GradCheckReport grad_check(const LossClosure& loss, std::span<const double> point,
                           std::span<const double> analytic, double eps, double tolerance,
                           std::span<const BlockSpan> blocks) {
    if (point.size() != analytic.size())
        throw DimensionError("grad_check: point and gradient sizes differ");
    std::vector<BlockSpan> whole;
    if (blocks.empty()) {
        whole.push_back({"params", 0, point.size()});
        blocks = whole;
    }

    GradCheckReport report;
    std::vector<double> x(point.begin(), point.end());
    for (const auto& block : blocks) {
        double block_max = 0.0;
        for (std::size_t i = block.offset; i < block.offset + block.size; ++i) {
            const double saved = x[i];
            x[i] = saved + eps;
            const double up = loss(x);
            x[i] = saved - eps;
            const double down = loss(x);
            x[i] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double ga = analytic[i];
            const double rel = std::abs(ga - numeric) / std::max(1e-8, std::abs(ga) + std::abs(numeric));
            block_max = std::max(block_max, rel);
            ++report.count;
        }
        report.block_errors.emplace_back(block.name, block_max);
        report.max_rel_error = std::max(report.max_rel_error, block_max);
    }
    report.passed = report.max_rel_error < tolerance;
    return report;
}

}  // namespace rgnn::nn
