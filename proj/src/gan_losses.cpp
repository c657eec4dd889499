#include "alignkit/gan_losses.hpp"

#include <cmath>

namespace alignkit {

namespace {

// Global mean of (score - target)^2 over every element of every list.
double mean_squared_to(const ScoreLists& lists, double target) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const auto& scores : lists) {
        for (double s : scores) {
            const double diff = s - target;
            acc += diff * diff;
            ++count;
        }
    }
    require(count > 0, "empty score lists");
    return acc / static_cast<double>(count);
}

void check_finite(double v) {
    require(std::isfinite(v), "non-finite loss component");
}

}  // namespace

double lsgan_generator_loss(const ScoreLists& fake_scores) {
    return mean_squared_to(fake_scores, 1.0);
}

double lsgan_discriminator_loss(const ScoreLists& real_scores,
                                const ScoreLists& fake_scores) {
    return mean_squared_to(real_scores, 1.0) + mean_squared_to(fake_scores, 0.0);
}

double feature_matching_loss(const FeatureLists& real_features,
                             const FeatureLists& fake_features) {
    require(real_features.size() == fake_features.size(),
            "sub-discriminator count mismatch");
    double total = 0.0;
    for (std::size_t d = 0; d < real_features.size(); ++d) {
        const auto& real_layers = real_features[d];
        const auto& fake_layers = fake_features[d];
        require(real_layers.size() == fake_layers.size(), "layer count mismatch");
        require(!real_layers.empty(), "empty feature list");
        double layer_acc = 0.0;
        for (std::size_t l = 0; l < real_layers.size(); ++l) {
            const Matrix& r = real_layers[l];
            const Matrix& f = fake_layers[l];
            require(r.same_shape(f), "feature shape mismatch");
            require(!r.data.empty(), "empty feature matrix");
            double abs_acc = 0.0;
            for (std::size_t i = 0; i < r.data.size(); ++i) {
                abs_acc += std::abs(r.data[i] - f.data[i]);
            }
            layer_acc += abs_acc / static_cast<double>(r.data.size());
        }
        total += layer_acc / static_cast<double>(real_layers.size());
    }
    return total;
}

double mel_l1_loss(const Waveform& a, const Waveform& b, const StftConfig& cfg) {
    require(a.sample_rate == b.sample_rate, "sample rate mismatch");
    require(a.samples.size() == b.samples.size(), "waveform length mismatch");

    const MelSpectrogram ma = mel_spectrogram(a, cfg);
    const MelSpectrogram mb = mel_spectrogram(b, cfg);
    double acc = 0.0;
    for (std::size_t i = 0; i < ma.frames.data.size(); ++i) {
        acc += std::abs(ma.frames.data[i] - mb.frames.data[i]);
    }
    return acc / static_cast<double>(ma.frames.data.size());
}

double generator_loss(double adv, double fm, double mel, const LossWeights& w) {
    check_finite(adv);
    check_finite(fm);
    check_finite(mel);
    return adv + w.lambda_fm * fm + w.lambda_mel * mel;
}

double total_loss(double l_g, double l_var, double l_align, const LossWeights& w) {
    check_finite(l_g);
    check_finite(l_var);
    check_finite(l_align);
    return l_g + w.lambda_var * l_var + w.lambda_align * l_align;
}

}  // namespace alignkit
