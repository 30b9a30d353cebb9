#pragma once

#include <rgnn/nn/matrix.hpp>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace rgnn::nn {

/// Named parameter blocks plus free-form metadata.
///
/// On disk:
///
///     rgnn-params 1
///     meta <key> <value>         (zero or more; value runs to end of line)
///     block <name> <rows> <cols> (one per block, in flat-view order)
///     data <count>
///     <count little-endian IEEE-754 doubles>
///
/// Round trip is bit-exact.
struct ParamContainer {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::pair<std::string, Matrix>> blocks;

    const std::string* meta(const std::string& key) const;
    const Matrix* block(const std::string& name) const;

    bool operator==(const ParamContainer&) const = default;
};

void write_params(std::ostream& out, const ParamContainer& params);
ParamContainer read_params(std::istream& in);

}  // namespace rgnn::nn
