#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "alignkit/forward_sum.hpp"
#include "alignkit/matrix.hpp"
#include "alignkit/wav.hpp"

namespace testutil {

inline alignkit::Waveform make_sine(double freq_hz, double seconds,
                                    double amplitude = 0.5, int sample_rate = 22050) {
    alignkit::Waveform w;
    w.sample_rate = sample_rate;
    const std::size_t n = static_cast<std::size_t>(seconds * sample_rate);
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        w.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                            static_cast<double>(i) / sample_rate);
    }
    return w;
}

inline alignkit::Waveform make_silence(double seconds, int sample_rate = 22050) {
    alignkit::Waveform w;
    w.sample_rate = sample_rate;
    w.samples.assign(static_cast<std::size_t>(seconds * sample_rate), 0.0);
    return w;
}

inline alignkit::Waveform make_noise(double seconds, double amplitude,
                                     unsigned seed = 1, int sample_rate = 22050) {
    alignkit::Waveform w;
    w.sample_rate = sample_rate;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    w.samples.resize(static_cast<std::size_t>(seconds * sample_rate));
    for (double& s : w.samples) s = u(rng);
    return w;
}

// Random column-normalized lattice in log domain.
inline alignkit::Matrix random_log_lattice(std::size_t n, std::size_t t,
                                           std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    alignkit::Matrix lp(n, t);
    for (std::size_t j = 0; j < t; ++j) {
        double sum = 0.0;
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = u(rng);
            sum += col[i];
        }
        for (std::size_t i = 0; i < n; ++i) lp(i, j) = std::log(col[i] / sum);
    }
    return lp;
}

// Brute-force forward-sum oracle: logsumexp over all enumerated monotonic
// complete alignments. Independent of the DP recursion it checks.
inline double brute_force_log_likelihood(const alignkit::Matrix& log_probs) {
    const auto alignments =
        alignkit::enumerate_alignments(log_probs.rows, log_probs.cols);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(alignments.size());
    for (const auto& durations : alignments) {
        double acc = 0.0;
        std::size_t t = 0;
        for (std::size_t i = 0; i < durations.size(); ++i) {
            for (int k = 0; k < durations[i]; ++k, ++t) acc += log_probs(i, t);
        }
        terms.push_back(acc);
        best = std::max(best, acc);
    }
    double sum = 0.0;
    for (double v : terms) sum += std::exp(v - best);
    return best + std::log(sum);
}

// Brute-force best path: max over enumerated alignments.
inline std::pair<double, std::vector<int>> brute_force_best_path(
    const alignkit::Matrix& log_probs) {
    const auto alignments =
        alignkit::enumerate_alignments(log_probs.rows, log_probs.cols);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> best_durations;
    for (const auto& durations : alignments) {
        double acc = 0.0;
        std::size_t t = 0;
        for (std::size_t i = 0; i < durations.size(); ++i) {
            for (int k = 0; k < durations[i]; ++k, ++t) acc += log_probs(i, t);
        }
        if (acc > best) {
            best = acc;
            best_durations = durations;
        }
    }
    return {best, best_durations};
}

}  // namespace testutil
