#pragma once

#include <optional>

#include "alignkit/matrix.hpp"

namespace alignkit {

// Column-stochastic token-given-frame distribution, kept in log domain.
struct SoftAlignment {
    Matrix log_probs;  // N x T, each column logsumexps to 0
};

// Static near-diagonal prior over token index per frame.
struct BetaBinomialPrior {
    Matrix log_prior;  // N x T, each column a normalized pmf in log domain
    double omega = 1.0;
};

// Pairwise Euclidean distances between token and frame embeddings.
// h_enc is N x dim, m_enc is T x dim; result is N x T.
Matrix distance_matrix(const Matrix& h_enc, const Matrix& m_enc);

// log-softmax of (-D + log_prior) over tokens, per frame column.
SoftAlignment soft_align(const Matrix& distances,
                         const BetaBinomialPrior* prior = nullptr);

// prior(i | frame j) = BetaBinomial(k=i; n=N-1, a=omega*(j+1), b=omega*(T-j)).
BetaBinomialPrior beta_binomial_prior(std::size_t n_tokens, std::size_t n_frames,
                                      double omega = 1.0);

// Stable log(exp(a) + exp(b)); -inf is the additive identity.
double log_add(double a, double b);

}  // namespace alignkit
