#pragma once

#include <vector>

#include "alignkit/forward_sum.hpp"
#include "alignkit/matrix.hpp"
#include "alignkit/soft_alignment.hpp"

namespace alignkit {

// Binary monotonic alignment: one token per frame, contiguous runs.
struct HardAlignment {
    Matrix mask;                 // N x T of 0/1
    std::vector<int> durations;  // per-token frame counts, sum = T
    double path_score = 0.0;     // sum of selected log-probs
};

// Viterbi monotonic alignment search. Ties prefer the diagonal move.
HardAlignment mas(const AlignmentLattice& lattice);

struct BinarizationOptions {
    bool mean_reduction = false;  // default: sum over all entries
};

// Cross-entropy of the hard path under the soft distribution. A selected
// entry with probability 0 saturates to +inf.
double binarization_loss(const SoftAlignment& soft, const HardAlignment& hard,
                         const BinarizationOptions& opts = {});

struct AlignmentLossResult {
    double total = 0.0;  // forward-sum loss + binarization loss
    HardAlignment hard;
    ForwardSumResult forward;
    double bin_loss = 0.0;
};

AlignmentLossResult alignment_loss(const AlignmentLattice& lattice);

}  // namespace alignkit
