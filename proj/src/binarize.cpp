#include "alignkit/binarize.hpp"

#include <cmath>
#include <limits>

namespace alignkit {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

HardAlignment mas(const AlignmentLattice& lattice) {
    const std::size_t N = lattice.n_tokens();
    const std::size_t T = lattice.n_frames();
    require(N >= 1, "empty lattice");
    require(T >= N, "no valid alignment: T < N");
    const Matrix& lp = lattice.log_probs;

    Matrix q(N, T, kNegInf);
    // from_diagonal(n, t): best predecessor was token n-1
    std::vector<std::vector<bool>> from_diagonal(N, std::vector<bool>(T, false));

    q(0, 0) = lp(0, 0);
    for (std::size_t t = 1; t < T; ++t) {
        const std::size_t n_lo = N + t >= T ? N + t - T : 0;
        const std::size_t n_hi = std::min(t, N - 1);
        for (std::size_t n = n_lo; n <= n_hi; ++n) {
            const double stay = q(n, t - 1);
            const double advance = n > 0 ? q(n - 1, t - 1) : kNegInf;
            if (advance >= stay) {
                q(n, t) = lp(n, t) + advance;
                from_diagonal[n][t] = true;
            } else {
                q(n, t) = lp(n, t) + stay;
            }
        }
    }

    HardAlignment hard;
    hard.mask = Matrix(N, T, 0.0);
    hard.durations.assign(N, 0);
    hard.path_score = q(N - 1, T - 1);

    std::size_t n = N - 1;
    for (std::size_t t = T; t-- > 0;) {
        hard.mask(n, t) = 1.0;
        ++hard.durations[n];
        if (t > 0 && from_diagonal[n][t]) --n;
    }
    return hard;
}

double binarization_loss(const SoftAlignment& soft, const HardAlignment& hard,
                         const BinarizationOptions& opts) {
    require(soft.log_probs.same_shape(hard.mask), "soft/hard shape mismatch");

    double total = 0.0;
    for (std::size_t i = 0; i < hard.mask.rows; ++i) {
        for (std::size_t j = 0; j < hard.mask.cols; ++j) {
            if (hard.mask(i, j) != 0.0) {
                const double lp = soft.log_probs(i, j);
                if (lp == kNegInf) {
                    return std::numeric_limits<double>::infinity();
                }
                total -= lp;
            }
        }
    }
    if (opts.mean_reduction) total /= static_cast<double>(hard.mask.cols);
    return total;
}

AlignmentLossResult alignment_loss(const AlignmentLattice& lattice) {
    AlignmentLossResult result;
    result.forward = forward_sum(lattice);
    result.hard = mas(lattice);
    SoftAlignment soft{lattice.log_probs};
    result.bin_loss = binarization_loss(soft, result.hard);
    result.total = result.forward.loss + result.bin_loss;
    return result;
}

}  // namespace alignkit
