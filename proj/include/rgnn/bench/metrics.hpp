#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

namespace rgnn::bench {

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct Metrics {
    double accuracy = 0.0;
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
    std::vector<ClassScores> per_class;
    /// confusion[true][predicted]
    std::vector<std::vector<long long>> confusion;
    std::size_t count = 0;

    /// F1 of class 1, the positive ("rumor") class of a binary task.
    double positive_f1() const { return per_class.size() == 2 ? per_class[1].f1 : 0.0; }
};

/// Precision/recall/F1 with 0/0 taken as 0. micro-F1 pools TP/FP/FN over
/// classes. Throws on length mismatch, empty input, or out-of-range class.
Metrics compute_metrics(std::span<const int> predictions, std::span<const int> labels, int num_classes);

nlohmann::ordered_json to_json(const Metrics& m);

/// Aligned plain-text summary.
void print_table(std::ostream& out, const Metrics& m);

}  // namespace rgnn::bench
