#include <rgnn/bench/metrics.hpp>

#include <rgnn/core/error.hpp>

#include <iomanip>
#include <ostream>

namespace rgnn::bench {

namespace {

double ratio(long long num, long long den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

Metrics compute_metrics(std::span<const int> predictions, std::span<const int> labels, int num_classes) {
    if (predictions.size() != labels.size())
        throw Error("compute_metrics: " + std::to_string(predictions.size()) + " predictions vs " +
                    std::to_string(labels.size()) + " labels");
    if (labels.empty()) throw Error("compute_metrics: empty input");
    if (num_classes < 1) throw Error("compute_metrics: need at least one class");
    const auto k = static_cast<std::size_t>(num_classes);

    Metrics m;
    m.count = labels.size();
    m.confusion.assign(k, std::vector<long long>(k, 0));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= num_classes || predictions[i] < 0 || predictions[i] >= num_classes)
            throw Error("compute_metrics: class index out of range");
        ++m.confusion[labels[i]][predictions[i]];
    }

    long long tp_sum = 0, fp_sum = 0, fn_sum = 0;
    double f1_sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        long long tp = m.confusion[c][c], fp = 0, fn = 0;
        for (std::size_t o = 0; o < k; ++o) {
            if (o == c) continue;
            fp += m.confusion[o][c];
            fn += m.confusion[c][o];
        }
        ClassScores s;
        s.precision = ratio(tp, tp + fp);
        s.recall = ratio(tp, tp + fn);
        s.f1 = f1_of(s.precision, s.recall);
        m.per_class.push_back(s);
        f1_sum += s.f1;
        tp_sum += tp;
        fp_sum += fp;
        fn_sum += fn;
    }
    m.accuracy = ratio(tp_sum, static_cast<long long>(m.count));
    // Pooled: 2TP / (2TP + FP + FN). In single-label data FP = FN = N - TP,
    // so this is TP / N exactly.
    m.micro_f1 = ratio(2 * tp_sum, 2 * tp_sum + fp_sum + fn_sum);
    m.macro_f1 = f1_sum / static_cast<double>(k);
    return m;
}

nlohmann::ordered_json to_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["count"] = m.count;
    j["accuracy"] = m.accuracy;
    j["micro_f1"] = m.micro_f1;
    j["macro_f1"] = m.macro_f1;
    if (m.per_class.size() == 2) j["positive_f1"] = m.positive_f1();
    auto& pc = j["per_class"] = nlohmann::ordered_json::array();
    for (const auto& s : m.per_class) {
        nlohmann::ordered_json c;
        c["precision"] = s.precision;
        c["recall"] = s.recall;
        c["f1"] = s.f1;
        pc.push_back(std::move(c));
    }
    j["confusion"] = m.confusion;
    return j;
}

void print_table(std::ostream& out, const Metrics& m) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << std::fixed << std::setprecision(4);
    out << std::left << std::setw(12) << "accuracy" << m.accuracy << '\n'
        << std::setw(12) << "micro-F1" << m.micro_f1 << '\n'
        << std::setw(12) << "macro-F1" << m.macro_f1 << '\n';
    if (m.per_class.size() == 2) out << std::setw(12) << "F1(pos)" << m.positive_f1() << '\n';
    out << '\n' << std::setw(8) << "class" << std::right << std::setw(11) << "precision"
        << std::setw(9) << "recall" << std::setw(9) << "F1" << '\n';
    for (std::size_t c = 0; c < m.per_class.size(); ++c) {
        const auto& s = m.per_class[c];
        out << std::left << std::setw(8) << c << std::right << std::setw(11) << s.precision
            << std::setw(9) << s.recall << std::setw(9) << s.f1 << '\n';
    }
    out << '\n' << "confusion (rows = true, cols = predicted)\n";
    for (const auto& row : m.confusion) {
        for (long long v : row) out << std::setw(6) << v;
        out << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

}  // namespace rgnn::bench
