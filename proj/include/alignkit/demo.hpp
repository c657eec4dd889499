#pragma once

#include <cstdint>
#include <vector>

#include "alignkit/matrix.hpp"
#include "alignkit/soft_alignment.hpp"

namespace alignkit {

struct DemoConfig {
    std::size_t n_tokens = 10;
    std::size_t n_frames = 40;
    std::size_t dim = 16;
    int steps = 500;
    double step_size = 0.5;
    uint64_t seed = 0;
    double omega = 1.0;
    bool use_prior = true;
    double noise_scale = 0.3;

    void validate() const;
};

struct PlantedInstance {
    Matrix h_enc;  // N x dim, frozen token embeddings
    Matrix m_enc;  // T x dim, noisy copies expanded by planted durations
    std::vector<int> planted_durations;
};

struct DemoReport {
    std::vector<int> planted_durations;
    std::vector<int> recovered_durations;
    std::vector<double> loss_trace;  // alignment loss per step
    int max_abs_duration_error = 0;
    bool converged = false;
    int steps_to_converge = -1;      // first step of the stable stretch
    bool diverged = false;
    int divergence_step = -1;
};

// Random tokens, a random composition of T into N positive durations, and
// frame embeddings built by copying each token d_i times plus noise.
PlantedInstance plant_instance(const DemoConfig& cfg);

// Alignment loss of (h_enc, m_enc) and its analytic gradient with respect
// to m_enc, chained through the L2 distances and the column softmax.
// include_bin adds the straight-through binarization term.
struct AlignmentGradient {
    double forward_sum_loss = 0.0;
    double bin_loss = 0.0;
    double total = 0.0;
    Matrix d_m_enc;  // T x dim
    std::vector<int> durations;
};

AlignmentGradient alignment_gradient(const Matrix& h_enc, const Matrix& m_enc,
                                     const BetaBinomialPrior* prior,
                                     bool include_bin = true);

// Gradient descent on m_enc only; convergence = recovered durations stable
// for 25 consecutive steps.
DemoReport run_demo(const DemoConfig& cfg);

}  // namespace alignkit
