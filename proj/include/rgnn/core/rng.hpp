#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>

namespace rgnn {

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a stream seed from a root seed and a list of stream coordinates
/// (e.g. {seed, link_index, purpose}). Order-sensitive.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept;

/// xoshiro256** generator. Self-contained so that streams are identical
/// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n). n must be > 0.
    std::uint64_t index(std::uint64_t n) noexcept;

    /// Integer in the closed range [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi) noexcept;

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Index drawn proportionally to nonnegative `weights` (cumulative scan).
    std::size_t categorical(std::span<const double> weights) noexcept;

    template <class T>
    void shuffle(std::span<T> values) noexcept {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t s_[4];
};

}  // namespace rgnn
