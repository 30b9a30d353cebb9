#pragma once

#include <rgnn/core/error.hpp>
#include <rgnn/embed/embedding_table.hpp>
#include <rgnn/graphs/graph.hpp>
#include <rgnn/ingest/events.hpp>
#include <rgnn/ingest/labels.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace rgnn::app {

/// Opening or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

ingest::EventLog load_events(const std::filesystem::path& path);
std::vector<ingest::LinkRecord> load_labels(const std::filesystem::path& path);
embed::EmbeddingTable load_embeddings(const std::filesystem::path& path);
graphs::WeightedGraph load_graph(const std::filesystem::path& path);

/// Writes via `write` into `path`, creating parent directories.
template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& write, bool binary = false);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace rgnn::app

#include <fstream>

namespace rgnn::app {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& write, bool binary) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write(out);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace rgnn::app
