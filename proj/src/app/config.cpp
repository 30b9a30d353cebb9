#include <rgnn/app/config.hpp>

#include <cstdio>
#include <fstream>

namespace rgnn::app {

namespace {

std::ifstream open_input(const std::filesystem::path& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

// Prefixes parse errors with the file name.
template <class F>
auto with_path(const std::filesystem::path& path, F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
}

}  // namespace

ingest::EventLog load_events(const std::filesystem::path& path) {
    auto in = open_input(path);
    return with_path(path, [&] { return ingest::parse_events(in); });
}

std::vector<ingest::LinkRecord> load_labels(const std::filesystem::path& path) {
    auto in = open_input(path);
    return with_path(path, [&] { return ingest::parse_labels(in); });
}

embed::EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    auto in = open_input(path);
    return with_path(path, [&] { return embed::read_embeddings(in); });
}

graphs::WeightedGraph load_graph(const std::filesystem::path& path) {
    auto in = open_input(path);
    return with_path(path, [&] { return graphs::read_edge_list(in); });
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace rgnn::app
