#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "alignkit/features.hpp"
#include "alignkit/matrix.hpp"
#include "alignkit/wav.hpp"

namespace alignkit {

struct MetricReport {
    double mcd = 0.0;            // dB
    double f0_rmse = 0.0;        // log-Hz
    std::size_t n_aligned_frames = 0;
    std::size_t n_voiced_pairs = 0;
};

// Orthonormal DCT-II of each log-mel frame, keeping coefficients 1..n_coeffs
// (the 0th power coefficient is dropped).
Matrix mel_cepstra(const MelSpectrogram& mel, std::size_t n_coeffs = 25);

// DTW path between two cepstra sequences under Euclidean frame cost.
std::vector<std::pair<std::size_t, std::size_t>> dtw_path(const Matrix& a,
                                                          const Matrix& b);

// Mel-cepstral distortion after DTW alignment, (10/ln10)*sqrt(2) scaling.
MetricReport mcd(const Waveform& ref, const Waveform& syn, const StftConfig& cfg);

// RMSE of log-F0 over DTW-aligned pairs where both frames are voiced.
MetricReport log_f0_rmse(const Waveform& ref, const Waveform& syn,
                         const StftConfig& cfg);

// Both metrics from one shared DTW pass.
MetricReport evaluate_pair(const Waveform& ref, const Waveform& syn,
                           const StftConfig& cfg);

}  // namespace alignkit
