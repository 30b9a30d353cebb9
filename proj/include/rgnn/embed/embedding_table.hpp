#pragma once

#include <rgnn/ingest/events.hpp>

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rgnn::embed {

using ingest::UserId;

/// Dense per-user vectors, row-major, one row per user.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::vector<UserId> users, std::size_t dim, std::vector<double> values);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return users_.size(); }
    const std::vector<UserId>& users() const noexcept { return users_; }
    const std::vector<double>& values() const noexcept { return values_; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * dim_, dim_}; }

    std::optional<std::size_t> index_of(const UserId& user) const;

    /// Row of `user`, or an empty span if unknown.
    std::span<const double> find(const UserId& user) const;

    bool all_finite() const;

    bool operator==(const EmbeddingTable& other) const {
        return users_ == other.users_ && dim_ == other.dim_ && values_ == other.values_;
    }

private:
    std::vector<UserId> users_;
    std::size_t dim_ = 0;
    std::vector<double> values_;
    std::unordered_map<UserId, std::size_t> index_;
};

/// Header `<num_users> <d>`, then `user v1 ... vd`. Values are written in
/// shortest round-trip form, so read(write(t)) == t bit for bit.
void write_embeddings(std::ostream& out, const EmbeddingTable& table);
EmbeddingTable read_embeddings(std::istream& in);

}  // namespace rgnn::embed
