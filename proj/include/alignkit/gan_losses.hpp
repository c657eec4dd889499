#pragma once

#include <vector>

#include "alignkit/features.hpp"
#include "alignkit/matrix.hpp"
#include "alignkit/wav.hpp"

namespace alignkit {

// Score sequences, one vector per sub-discriminator.
using ScoreLists = std::vector<std::vector<double>>;

// Per-layer feature maps, one list per sub-discriminator.
using FeatureLists = std::vector<std::vector<Matrix>>;

struct LossWeights {
    double lambda_fm = 2.0;
    double lambda_mel = 45.0;
    double lambda_var = 1.0;
    double lambda_align = 2.0;
};

// Least-squares GAN objectives: generator pushes fake scores to 1,
// discriminator pushes real to 1 and fake to 0. Reduction: global mean over
// all elements per group, summed over groups.
double lsgan_generator_loss(const ScoreLists& fake_scores);
double lsgan_discriminator_loss(const ScoreLists& real_scores,
                                const ScoreLists& fake_scores);

// Sum over sub-discriminators of the mean over layers of the elementwise
// mean absolute difference.
double feature_matching_loss(const FeatureLists& real_features,
                             const FeatureLists& fake_features);

// Elementwise mean absolute difference of the two log-mel spectrograms.
double mel_l1_loss(const Waveform& a, const Waveform& b, const StftConfig& cfg);

// L_g = adv + lambda_fm * fm + lambda_mel * mel
double generator_loss(double adv, double fm, double mel, const LossWeights& w);

// L = L_g + lambda_var * L_var + lambda_align * L_align
double total_loss(double l_g, double l_var, double l_align, const LossWeights& w);

}  // namespace alignkit
