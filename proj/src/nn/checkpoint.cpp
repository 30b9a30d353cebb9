#include <rgnn/nn/checkpoint.hpp>

#include <rgnn/core/error.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

namespace rgnn::nn {

namespace {

constexpr const char* kMagic = "rgnn-params 1";

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
    return v;
}

}  // namespace

const std::string* ParamContainer::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return &v;
    return nullptr;
}

const Matrix* ParamContainer::block(const std::string& name) const {
    for (const auto& [n, m] : blocks)
        if (n == name) return &m;
    return nullptr;
}

void write_params(std::ostream& out, const ParamContainer& params) {
    out << kMagic << '\n';
    for (const auto& [k, v] : params.metadata) {
        if (k.empty() || k.find_first_of(" \n") != std::string::npos || v.find('\n') != std::string::npos)
            throw Error("checkpoint: invalid metadata entry '" + k + "'");
        out << "meta " << k << ' ' << v << '\n';
    }
    std::size_t total = 0;
    for (const auto& [name, m] : params.blocks) {
        if (name.empty() || name.find_first_of(" \n") != std::string::npos)
            throw Error("checkpoint: invalid block name '" + name + "'");
        out << "block " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
        total += m.size();
    }
    out << "data " << total << '\n';
    for (const auto& [name, m] : params.blocks) {
        for (double v : m.data()) {
            const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
            char buf[8];
            std::memcpy(buf, &bits, 8);
            out.write(buf, 8);
        }
    }
    if (!out) throw Error("checkpoint: write failed");
}

ParamContainer read_params(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) || line != kMagic) throw ParseError(1, "not a parameter checkpoint");

    ParamContainer params;
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    std::size_t total = 0;
    bool have_data = false;
    while (!have_data && std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "meta") {
            std::string key;
            ls >> key;
            std::string value;
            std::getline(ls, value);
            if (!value.empty() && value.front() == ' ') value.erase(0, 1);
            params.metadata.emplace_back(key, value);
        } else if (tag == "block") {
            std::string name;
            std::size_t rows = 0, cols = 0;
            if (!(ls >> name >> rows >> cols)) throw ParseError(lineno, "malformed block line");
            params.blocks.emplace_back(name, Matrix());
            shapes.emplace_back(rows, cols);
        } else if (tag == "data") {
            if (!(ls >> total)) throw ParseError(lineno, "malformed data line");
            have_data = true;
        } else {
            throw ParseError(lineno, "unexpected header line '" + line + "'");
        }
    }
    if (!have_data) throw ParseError(lineno, "missing data section");

    std::size_t expected = 0;
    for (const auto& [r, c] : shapes) expected += r * c;
    if (expected != total) throw ParseError(lineno, "data count does not match block shapes");

    for (std::size_t b = 0; b < shapes.size(); ++b) {
        const auto [rows, cols] = shapes[b];
        std::vector<double> values(rows * cols);
        for (double& v : values) {
            char buf[8];
            if (!in.read(buf, 8)) throw ParseError(lineno, "truncated parameter data");
            std::uint64_t bits;
            std::memcpy(&bits, buf, 8);
            v = std::bit_cast<double>(to_little_endian(bits));
        }
        params.blocks[b].second = Matrix(rows, cols, std::move(values));
    }
    return params;
}

}  // namespace rgnn::nn
