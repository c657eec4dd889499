#include "alignkit/forward_sum.hpp"

#include <cmath>
#include <limits>

#include "alignkit/soft_alignment.hpp"

namespace alignkit {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_lattice(const AlignmentLattice& lattice) {
    require(lattice.n_tokens() >= 1, "empty lattice");
    require(lattice.n_frames() >= lattice.n_tokens(), "no valid alignment: T < N");
    for (double v : lattice.log_probs.data) {
        require(!std::isnan(v) && v != std::numeric_limits<double>::infinity(),
                "lattice values must be finite or -inf");
    }
}
}  // namespace

ForwardSumResult forward_sum(const AlignmentLattice& lattice) {
    check_lattice(lattice);
    const std::size_t N = lattice.n_tokens();
    const std::size_t T = lattice.n_frames();
    const Matrix& lp = lattice.log_probs;

    // alpha(n, t): log-prob of all monotonic prefixes ending at token n, frame t.
    Matrix alpha(N, T, kNegInf);
    alpha(0, 0) = lp(0, 0);
    for (std::size_t t = 1; t < T; ++t) {
        // reachable tokens: at most one new token per frame, and enough
        // frames must remain to cover the rest
        const std::size_t n_lo = N + t >= T ? N - (T - t) : 0;
        const std::size_t n_hi = std::min(t, N - 1);
        for (std::size_t n = n_lo; n <= n_hi; ++n) {
            double stay = alpha(n, t - 1);
            double advance = n > 0 ? alpha(n - 1, t - 1) : kNegInf;
            alpha(n, t) = lp(n, t) + log_add(stay, advance);
        }
    }
    const double log_likelihood = alpha(N - 1, T - 1);

    // beta(n, t): log-prob of all monotonic suffixes starting after (n, t).
    Matrix beta(N, T, kNegInf);
    beta(N - 1, T - 1) = 0.0;
    for (std::size_t t = T - 1; t-- > 0;) {
        const std::size_t n_lo = N + t >= T ? N - (T - t) : 0;
        const std::size_t n_hi = std::min(t, N - 1);
        for (std::size_t n = n_lo; n <= n_hi; ++n) {
            double stay = beta(n, t + 1) + lp(n, t + 1);
            double advance = n + 1 < N ? beta(n + 1, t + 1) + lp(n + 1, t + 1) : kNegInf;
            beta(n, t) = log_add(stay, advance);
        }
    }

    ForwardSumResult result;
    result.log_likelihood = log_likelihood;
    result.loss = -log_likelihood;
    result.grad = Matrix(N, T, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t t = 0; t < T; ++t) {
            const double log_gamma = alpha(n, t) + beta(n, t) - log_likelihood;
            if (log_gamma != kNegInf && !std::isnan(log_gamma)) {
                result.grad(n, t) = -std::exp(log_gamma);
            }
        }
    }
    return result;
}

std::vector<std::vector<int>> enumerate_alignments(std::size_t n_tokens,
                                                   std::size_t n_frames) {
    require(n_tokens >= 1 && n_tokens <= n_frames && n_frames <= 16,
            "enumerate_alignments requires 1 <= N <= T <= 16");

    std::vector<std::vector<int>> out;
    std::vector<int> current(n_tokens, 0);
    // recursive composition enumeration in lexicographic order
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == n_tokens) {
            current[pos] = remaining;
            out.push_back(current);
            return;
        }
        const int max_here = remaining - static_cast<int>(n_tokens - pos - 1);
        for (int d = 1; d <= max_here; ++d) {
            current[pos] = d;
            self(self, pos + 1, remaining - d);
        }
    };
    rec(rec, 0, static_cast<int>(n_frames));
    return out;
}

}  // namespace alignkit
