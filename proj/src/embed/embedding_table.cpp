#include <rgnn/embed/embedding_table.hpp>

#include <rgnn/core/error.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace rgnn::embed {

EmbeddingTable::EmbeddingTable(std::vector<UserId> users, std::size_t dim,
                               std::vector<double> values)
    : users_(std::move(users)), dim_(dim), values_(std::move(values)) {
    if (values_.size() != users_.size() * dim_)
        throw DimensionError("embedding table: values size does not match users x dim");
    index_.reserve(users_.size());
    for (std::size_t i = 0; i < users_.size(); ++i)
        if (!index_.emplace(users_[i], i).second)
            throw IntegrityError("embedding table: duplicate user " + users_[i]);
}

std::optional<std::size_t> EmbeddingTable::index_of(const UserId& user) const {
    auto it = index_.find(user);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const double> EmbeddingTable::find(const UserId& user) const {
    auto i = index_of(user);
    if (!i) return {};
    return row(*i);
}

bool EmbeddingTable::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
    out << table.size() << ' ' << table.dim() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.users()[i];
        for (double v : table.row(i)) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        out << '\n';
    }
}

EmbeddingTable read_embeddings(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw ParseError(1, "missing embedding header");
    std::istringstream header(line);
    std::size_t n = 0, dim = 0;
    if (!(header >> n >> dim) || dim == 0) throw ParseError(1, "expected '<num_users> <d>'");

    std::vector<UserId> users;
    std::vector<double> values;
    users.reserve(n);
    values.reserve(n * dim);
    while (users.size() < n && std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const char* p = line.data();
        const char* end = p + line.size();
        const char* id_end = p;
        while (id_end < end && *id_end != ' ') ++id_end;
        users.emplace_back(p, id_end);
        p = id_end;
        for (std::size_t k = 0; k < dim; ++k) {
            while (p < end && *p == ' ') ++p;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(p, end, v);
            if (ec != std::errc()) throw ParseError(lineno, "expected " + std::to_string(dim) + " values");
            if (!std::isfinite(v)) throw ParseError(lineno, "non-finite embedding value");
            values.push_back(v);
            p = ptr;
        }
        while (p < end && *p == ' ') ++p;
        if (p != end) throw ParseError(lineno, "trailing data after " + std::to_string(dim) + " values");
    }
    if (users.size() != n)
        throw ParseError(lineno, "expected " + std::to_string(n) + " rows, got " + std::to_string(users.size()));
    return EmbeddingTable(std::move(users), dim, std::move(values));
}

}  // namespace rgnn::embed
