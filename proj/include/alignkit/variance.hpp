#pragma once

#include <vector>

#include "alignkit/matrix.hpp"

namespace alignkit {

struct TokenVariance {
    std::vector<double> pitch;   // log-Hz, 0 if the whole span is unvoiced
    std::vector<double> energy;
};

struct UpsampleConfig {
    double sigma = 1.0;  // temperature, in frames
};

// Per-token mean of frame values over duration spans. With voicing given,
// only voiced frames contribute; a fully unvoiced span yields 0.
std::vector<double> token_average(const std::vector<double>& frame_values,
                                  const std::vector<bool>* voicing,
                                  const std::vector<int>& durations);

// ||d - d_hat|| + ||p - p_hat|| + ||e - e_hat||, Euclidean norms.
double variance_loss(const std::vector<double>& d, const std::vector<double>& p,
                     const std::vector<double>& e, const std::vector<double>& d_hat,
                     const std::vector<double>& p_hat, const std::vector<double>& e_hat);

// Gaussian upsampling: frame t is a softmax-weighted mixture of token rows,
// weighted by distance to duration-run midpoints. h is N x dim, result T x dim.
Matrix gaussian_upsample(const Matrix& h, const std::vector<int>& durations,
                         const UpsampleConfig& cfg = {});

// Vanilla length regulation by repetition, kept as a comparison baseline.
Matrix repeat_upsample(const Matrix& h, const std::vector<int>& durations);

}  // namespace alignkit
