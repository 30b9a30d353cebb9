#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rgnn::ingest {

struct LinkRecord {
    std::string link_id;
    int label = 0;

    bool operator==(const LinkRecord&) const = default;
};

/// Tab-separated `link_id<TAB>class_index`; `#` starts a comment line.
/// A link may appear only once.
std::vector<LinkRecord> parse_labels(std::istream& in);
void write_labels(std::ostream& out, const std::vector<LinkRecord>& labels);

}  // namespace rgnn::ingest
