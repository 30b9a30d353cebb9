#include <rgnn/bench/split.hpp>

#include <rgnn/core/error.hpp>
#include <rgnn/core/rng.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace rgnn::bench {

namespace {

constexpr std::uint64_t kSplitStream = 0x53504c4954;

// Rounds the class x part target matrix t[c][p] = n_c * r_p so that every
// entry is floor or ceil of its target, rows sum to n_c and columns sum to
// `totals`. Round-ups are a bipartite flow from classes to parts; each unit is
// placed by an augmenting path. Parts are tried largest remainder first.
std::vector<std::array<std::size_t, 3>> round_matrix(const std::vector<std::size_t>& counts,
                                                     const std::array<double, 3>& ratios,
                                                     const std::array<std::size_t, 3>& totals) {
    const std::size_t k = counts.size();
    std::vector<std::array<std::size_t, 3>> out(k);
    std::vector<std::array<double, 3>> frac(k);
    std::vector<std::size_t> ups(k);
    std::array<std::size_t, 3> room = totals;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t floors = 0;
        for (std::size_t p = 0; p < 3; ++p) {
            const double exact = static_cast<double>(counts[c]) * ratios[p];
            double fl = std::floor(exact);
            // snap values within rounding noise of an integer
            if (exact - fl > 1.0 - 1e-9) fl += 1.0;
            out[c][p] = static_cast<std::size_t>(fl);
            frac[c][p] = std::max(0.0, exact - fl);
            floors += out[c][p];
            if (out[c][p] > room[p]) throw ConfigError("split: part sizes inconsistent with class counts");
            room[p] -= out[c][p];
        }
        ups[c] = counts[c] - floors;
    }

    std::vector<std::array<bool, 3>> up(k, {false, false, false});
    auto can_up = [&](std::size_t c, std::size_t p) { return frac[c][p] > 1e-9 && !up[c][p]; };
    auto part_order = [&](std::size_t c) {
        std::array<std::size_t, 3> order{0, 1, 2};
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return frac[c][a] > frac[c][b]; });
        return order;
    };

    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t unit = 0; unit < ups[c]; ++unit) {
            // BFS over (class -> part) edges; a full part forwards to any class rounded up there.
            std::vector<std::ptrdiff_t> class_from(k, -1);  // part that reached this class
            std::array<std::ptrdiff_t, 3> part_from{-1, -1, -1};  // class that reached this part
            std::vector<bool> seen(k, false);
            std::vector<std::size_t> queue{c};
            seen[c] = true;
            std::ptrdiff_t found = -1;
            for (std::size_t qi = 0; qi < queue.size() && found < 0; ++qi) {
                const std::size_t cur = queue[qi];
                for (std::size_t p : part_order(cur)) {
                    if (!can_up(cur, p) || part_from[p] >= 0) continue;
                    part_from[p] = static_cast<std::ptrdiff_t>(cur);
                    if (room[p] > 0) {
                        found = static_cast<std::ptrdiff_t>(p);
                        break;
                    }
                    for (std::size_t other = 0; other < k; ++other)
                        if (!seen[other] && up[other][p]) {
                            seen[other] = true;
                            class_from[other] = static_cast<std::ptrdiff_t>(p);
                            queue.push_back(other);
                        }
                }
            }
            if (found < 0) throw ConfigError("split: no stratified rounding for these ratios");
            --room[static_cast<std::size_t>(found)];
            // walk back: class x moves its round-up from class_from[x] to p
            auto p = static_cast<std::size_t>(found);
            while (true) {
                const auto x = static_cast<std::size_t>(part_from[p]);
                up[x][p] = true;
                if (x == c) break;
                const auto prev = static_cast<std::size_t>(class_from[x]);
                up[x][prev] = false;
                p = prev;
            }
        }
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t p = 0; p < 3; ++p) out[c][p] += up[c][p] ? 1 : 0;
    return out;
}

}  // namespace

Split split_dataset(std::span<const int> labels, int num_classes, const SplitRatios& ratios,
                    std::uint64_t seed) {
    if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
        std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9)
        throw ConfigError("split ratios must be nonnegative and sum to 1");
    const std::size_t n = labels.size();
    const auto k = static_cast<std::size_t>(num_classes);

    std::vector<std::vector<std::size_t>> by_class(k);
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] < 0 || labels[i] >= num_classes) throw ConfigError("label out of range in split");
        by_class[labels[i]].push_back(i);
    }
    std::vector<std::size_t> counts(k);
    for (std::size_t c = 0; c < k; ++c) counts[c] = by_class[c].size();

    const double exact_val = static_cast<double>(n) * ratios.validation;
    const double exact_test = static_cast<double>(n) * ratios.test;
    auto val_total = static_cast<std::size_t>(std::llround(exact_val));
    auto test_total = static_cast<std::size_t>(std::llround(exact_test));
    // keep the train size at floor or ceil of its exact share
    const double exact_train = static_cast<double>(n) - exact_val - exact_test;
    if (static_cast<double>(n - std::min(n, val_total + test_total)) < std::floor(exact_train + 1e-9)) {
        if (exact_test - std::floor(exact_test) <= exact_val - std::floor(exact_val)) --test_total;
        else --val_total;
    } else if (static_cast<double>(n - std::min(n, val_total + test_total)) > std::ceil(exact_train - 1e-9)) {
        if (exact_test - std::floor(exact_test) >= exact_val - std::floor(exact_val)) ++test_total;
        else ++val_total;
    }
    if (val_total + test_total >= n || val_total == 0 || test_total == 0)
        throw ConfigError("split leaves an empty part (n=" + std::to_string(n) + ")");

    const auto table = round_matrix(counts, {ratios.validation, ratios.test, ratios.train},
                                    {val_total, test_total, n - val_total - test_total});

    Split split;
    for (std::size_t c = 0; c < k; ++c) {
        auto idx = by_class[c];
        Rng rng(derive_seed({seed, kSplitStream, c}));
        rng.shuffle(std::span<std::size_t>(idx));
        std::size_t pos = 0;
        for (std::size_t i = 0; i < table[c][0]; ++i) split.validation.push_back(idx[pos++]);
        for (std::size_t i = 0; i < table[c][1]; ++i) split.test.push_back(idx[pos++]);
        while (pos < idx.size()) split.train.push_back(idx[pos++]);
    }
    for (auto* part : {&split.train, &split.validation, &split.test}) std::sort(part->begin(), part->end());
    if (split.train.empty() || split.validation.empty() || split.test.empty())
        throw ConfigError("split leaves an empty part");
    return split;
}

Split split_dataset(const ingest::Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed) {
    const auto labels = dataset.labels();
    return split_dataset(labels, dataset.num_classes, ratios, seed);
}

}  // namespace rgnn::bench
