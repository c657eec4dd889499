#pragma once

#include <vector>

#include "alignkit/matrix.hpp"

namespace alignkit {

// N x T lattice of log token-given-frame probabilities.
struct AlignmentLattice {
    Matrix log_probs;

    std::size_t n_tokens() const { return log_probs.rows; }
    std::size_t n_frames() const { return log_probs.cols; }
};

struct ForwardSumResult {
    double log_likelihood = 0.0;
    double loss = 0.0;   // -log_likelihood
    Matrix grad;         // d loss / d log_probs = -posterior occupancy, N x T
};

// Log-likelihood of all monotonic complete alignments (every token used at
// least once, no skips), with the analytic gradient via forward-backward.
ForwardSumResult forward_sum(const AlignmentLattice& lattice);

// All length-N positive integer duration vectors summing to T, lexicographic.
// Guarded to N <= T <= 16. Test oracle for the lattice recursions.
std::vector<std::vector<int>> enumerate_alignments(std::size_t n_tokens,
                                                   std::size_t n_frames);

}  // namespace alignkit
