#include "alignkit/soft_alignment.hpp"

#include <cmath>
#include <limits>

namespace alignkit {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

Matrix distance_matrix(const Matrix& h_enc, const Matrix& m_enc) {
    require(h_enc.cols == m_enc.cols, "embedding dimension mismatch");
    require(h_enc.rows >= 1 && m_enc.rows >= 1, "empty embedding matrix");

    Matrix d(h_enc.rows, m_enc.rows);
    for (std::size_t i = 0; i < h_enc.rows; ++i) {
        for (std::size_t j = 0; j < m_enc.rows; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < h_enc.cols; ++k) {
                const double diff = h_enc(i, k) - m_enc(j, k);
                acc += diff * diff;
            }
            d(i, j) = std::sqrt(acc);
        }
    }
    return d;
}

SoftAlignment soft_align(const Matrix& distances, const BetaBinomialPrior* prior) {
    if (prior != nullptr) {
        require(prior->log_prior.same_shape(distances), "prior shape mismatch");
    }
    for (double v : distances.data) {
        require(std::isfinite(v), "non-finite distance");
    }

    SoftAlignment out;
    out.log_probs = Matrix(distances.rows, distances.cols);
    for (std::size_t j = 0; j < distances.cols; ++j) {
        double mx = kNegInf;
        for (std::size_t i = 0; i < distances.rows; ++i) {
            double z = -distances(i, j);
            if (prior != nullptr) z += prior->log_prior(i, j);
            out.log_probs(i, j) = z;
            mx = std::max(mx, z);
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < distances.rows; ++i) {
            sum += std::exp(out.log_probs(i, j) - mx);
        }
        const double lse = mx + std::log(sum);
        for (std::size_t i = 0; i < distances.rows; ++i) {
            out.log_probs(i, j) -= lse;
        }
    }
    return out;
}

BetaBinomialPrior beta_binomial_prior(std::size_t n_tokens, std::size_t n_frames,
                                      double omega) {
    require(n_tokens >= 1 && n_frames >= 1, "invalid prior sizes");
    require(omega > 0.0, "omega must be positive");

    const double n = static_cast<double>(n_tokens) - 1.0;
    BetaBinomialPrior prior;
    prior.omega = omega;
    prior.log_prior = Matrix(n_tokens, n_frames);

    auto log_beta = [](double x, double y) {
        return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y);
    };

    for (std::size_t j = 0; j < n_frames; ++j) {
        const double a = omega * (static_cast<double>(j) + 1.0);
        const double b = omega * (static_cast<double>(n_frames) - static_cast<double>(j));
        const double log_beta_ab = log_beta(a, b);
        for (std::size_t i = 0; i < n_tokens; ++i) {
            const double k = static_cast<double>(i);
            const double log_choose =
                std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
            prior.log_prior(i, j) =
                log_choose + log_beta(k + a, n - k + b) - log_beta_ab;
        }
    }
    return prior;
}

}  // namespace alignkit
