#pragma once

#include <string>

#include "alignkit/matrix.hpp"

namespace alignkit {

// Sidecar metadata for the <name>.bin / <name>.json feature file pair.
// The .bin holds row-major little-endian f32; voicing is stored as 0.0/1.0.
struct FeatureFileMeta {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string kind = "matrix";  // "mel"|"pitch"|"energy"|"voicing"|"matrix"
    int sample_rate = 0;
    int hop_size = 0;
};

// `path` may name either the .bin or the .json side; the sibling is derived.
void write_matrix(const std::string& path, const Matrix& m, const FeatureFileMeta& meta);
Matrix read_matrix(const std::string& path, FeatureFileMeta* meta_out = nullptr);

}  // namespace alignkit
