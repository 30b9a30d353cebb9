#pragma once

#include <rgnn/ingest/dataset.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace rgnn::bench {

struct SplitRatios {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;

    bool operator==(const Split&) const = default;
};

/// Stratified split. Part sizes are round(N * ratio) (train takes the rest);
/// each part's share is apportioned over classes by largest remainder, so
/// every class lands within one sample of exact proportionality. Indices in
/// each part are sorted. Throws ConfigError if any part would be empty.
Split split_dataset(std::span<const int> labels, int num_classes, const SplitRatios& ratios,
                    std::uint64_t seed);
Split split_dataset(const ingest::Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed);

}  // namespace rgnn::bench
