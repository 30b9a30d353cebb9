#include <rgnn/ingest/labels.hpp>

#include <rgnn/core/error.hpp>

#include <charconv>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace rgnn::ingest {

std::vector<LinkRecord> parse_labels(std::istream& in) {
    std::vector<LinkRecord> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(lineno, "expected link_id<TAB>class_index");
        std::string link = line.substr(0, tab);
        std::string cls = line.substr(tab + 1);
        if (link.empty()) throw ParseError(lineno, "empty link id");

        int label = -1;
        auto [ptr, ec] = std::from_chars(cls.data(), cls.data() + cls.size(), label);
        if (ec != std::errc() || ptr != cls.data() + cls.size() || label < 0)
            throw ParseError(lineno, "invalid class index '" + cls + "'");
        if (!seen.insert(link).second) throw ParseError(lineno, "duplicate label for link " + link);
        out.push_back({std::move(link), label});
    }
    return out;
}

void write_labels(std::ostream& out, const std::vector<LinkRecord>& labels) {
    for (const auto& r : labels) out << r.link_id << '\t' << r.label << '\n';
}

}  // namespace rgnn::ingest
