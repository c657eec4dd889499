#include "alignkit/variance.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace alignkit {

std::vector<double> token_average(const std::vector<double>& frame_values,
                                  const std::vector<bool>* voicing,
                                  const std::vector<int>& durations) {
    const long total = std::accumulate(durations.begin(), durations.end(), 0L);
    require(total == static_cast<long>(frame_values.size()),
            "durations do not sum to frame count");
    if (voicing != nullptr) {
        require(voicing->size() == frame_values.size(), "voicing length mismatch");
    }

    std::vector<double> out(durations.size(), 0.0);
    std::size_t frame = 0;
    for (std::size_t i = 0; i < durations.size(); ++i) {
        require(durations[i] > 0, "durations must be positive");
        double sum = 0.0;
        int count = 0;
        for (int k = 0; k < durations[i]; ++k, ++frame) {
            if (voicing != nullptr && !(*voicing)[frame]) continue;
            sum += frame_values[frame];
            ++count;
        }
        out[i] = count > 0 ? sum / count : 0.0;
    }
    return out;
}

namespace {
double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}
}  // namespace

double variance_loss(const std::vector<double>& d, const std::vector<double>& p,
                     const std::vector<double>& e, const std::vector<double>& d_hat,
                     const std::vector<double>& p_hat, const std::vector<double>& e_hat) {
    require(d.size() == d_hat.size() && p.size() == p_hat.size() &&
                e.size() == e_hat.size() && d.size() == p.size() && p.size() == e.size(),
            "variance sequence length mismatch");
    return l2_distance(d, d_hat) + l2_distance(p, p_hat) + l2_distance(e, e_hat);
}

Matrix gaussian_upsample(const Matrix& h, const std::vector<int>& durations,
                         const UpsampleConfig& cfg) {
    require(h.rows == durations.size(), "durations length must match token count");
    require(cfg.sigma > 0.0, "sigma must be positive");

    const std::size_t n = h.rows;
    std::vector<double> centers(n);
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        require(durations[i] > 0, "durations must be positive");
        total += durations[i];
        centers[i] = static_cast<double>(total) - durations[i] / 2.0;
    }
    const std::size_t T = static_cast<std::size_t>(total);
    require(T >= 1, "empty duration sequence");

    const double inv_two_sigma_sq = 1.0 / (2.0 * cfg.sigma * cfg.sigma);
    Matrix out(T, h.cols, 0.0);
    std::vector<double> weights(n);
    for (std::size_t t = 0; t < T; ++t) {
        const double q = static_cast<double>(t) + 0.5;
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = q - centers[i];
            weights[i] = -diff * diff * inv_two_sigma_sq;
            mx = std::max(mx, weights[i]);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] = std::exp(weights[i] - mx);
            sum += weights[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double w = weights[i] / sum;
            for (std::size_t k = 0; k < h.cols; ++k) out(t, k) += w * h(i, k);
        }
    }
    return out;
}

Matrix repeat_upsample(const Matrix& h, const std::vector<int>& durations) {
    require(h.rows == durations.size(), "durations length must match token count");
    long total = 0;
    for (int d : durations) {
        require(d > 0, "durations must be positive");
        total += d;
    }
    Matrix out(static_cast<std::size_t>(total), h.cols);
    std::size_t t = 0;
    for (std::size_t i = 0; i < h.rows; ++i) {
        for (int k = 0; k < durations[i]; ++k, ++t) {
            for (std::size_t c = 0; c < h.cols; ++c) out(t, c) = h(i, c);
        }
    }
    return out;
}

}  // namespace alignkit
