#include "alignkit/demo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "alignkit/binarize.hpp"
#include "alignkit/forward_sum.hpp"

namespace alignkit {

void DemoConfig::validate() const {
    require(n_tokens >= 1 && n_frames >= n_tokens, "need n_frames >= n_tokens >= 1");
    require(dim >= 1, "dim must be >= 1");
    require(steps >= 1, "steps must be >= 1");
    require(step_size > 0.0, "step_size must be positive");
    require(omega > 0.0, "omega must be positive");
    require(noise_scale >= 0.0, "noise_scale must be non-negative");
}

PlantedInstance plant_instance(const DemoConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> unit(0.0, 1.0);

    PlantedInstance inst;
    inst.h_enc = Matrix(cfg.n_tokens, cfg.dim);
    for (double& v : inst.h_enc.data) v = unit(rng);

    // Uniform random composition of T into N positive parts: N-1 distinct
    // cut points in {1..T-1}.
    inst.planted_durations.assign(cfg.n_tokens, 0);
    if (cfg.n_tokens == 1) {
        inst.planted_durations[0] = static_cast<int>(cfg.n_frames);
    } else {
        std::vector<int> cuts;
        std::vector<int> pool(cfg.n_frames - 1);
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i) + 1;
        std::shuffle(pool.begin(), pool.end(), rng);
        cuts.assign(pool.begin(), pool.begin() + static_cast<long>(cfg.n_tokens) - 1);
        std::sort(cuts.begin(), cuts.end());
        int prev = 0;
        for (std::size_t i = 0; i + 1 < cfg.n_tokens; ++i) {
            inst.planted_durations[i] = cuts[i] - prev;
            prev = cuts[i];
        }
        inst.planted_durations[cfg.n_tokens - 1] = static_cast<int>(cfg.n_frames) - prev;
    }

    inst.m_enc = Matrix(cfg.n_frames, cfg.dim);
    std::size_t t = 0;
    for (std::size_t i = 0; i < cfg.n_tokens; ++i) {
        for (int k = 0; k < inst.planted_durations[i]; ++k, ++t) {
            for (std::size_t c = 0; c < cfg.dim; ++c) {
                inst.m_enc(t, c) = inst.h_enc(i, c) + cfg.noise_scale * unit(rng);
            }
        }
    }
    return inst;
}

AlignmentGradient alignment_gradient(const Matrix& h_enc, const Matrix& m_enc,
                                     const BetaBinomialPrior* prior,
                                     bool include_bin) {
    const std::size_t N = h_enc.rows;
    const std::size_t T = m_enc.rows;
    const std::size_t dim = h_enc.cols;

    const Matrix dist = distance_matrix(h_enc, m_enc);
    const SoftAlignment soft = soft_align(dist, prior);
    const AlignmentLattice lattice{soft.log_probs};

    AlignmentGradient out;
    const ForwardSumResult fs = forward_sum(lattice);
    out.forward_sum_loss = fs.loss;

    // d loss / d log A
    Matrix g = fs.grad;
    HardAlignment hard = mas(lattice);
    out.durations = hard.durations;
    if (include_bin) {
        out.bin_loss = binarization_loss(soft, hard);
        for (std::size_t i = 0; i < g.data.size(); ++i) {
            g.data[i] -= hard.mask.data[i];  // mask held constant
        }
    }
    out.total = out.forward_sum_loss + out.bin_loss;

    // Through the per-column log-softmax: dL/dz = g - A * colsum(g),
    // then dL/dD = -dL/dz.
    Matrix d_dist(N, T);
    for (std::size_t j = 0; j < T; ++j) {
        double colsum = 0.0;
        for (std::size_t i = 0; i < N; ++i) colsum += g(i, j);
        for (std::size_t i = 0; i < N; ++i) {
            const double a = std::exp(soft.log_probs(i, j));
            d_dist(i, j) = -(g(i, j) - a * colsum);
        }
    }

    // dD_ij/dm_j = (m_j - h_i) / D_ij
    out.d_m_enc = Matrix(T, dim, 0.0);
    for (std::size_t j = 0; j < T; ++j) {
        for (std::size_t i = 0; i < N; ++i) {
            const double d = std::max(dist(i, j), 1e-12);
            const double scale = d_dist(i, j) / d;
            for (std::size_t c = 0; c < dim; ++c) {
                out.d_m_enc(j, c) += scale * (m_enc(j, c) - h_enc(i, c));
            }
        }
    }
    return out;
}

DemoReport run_demo(const DemoConfig& cfg) {
    cfg.validate();
    const PlantedInstance inst = plant_instance(cfg);

    BetaBinomialPrior prior;
    if (cfg.use_prior) {
        prior = beta_binomial_prior(cfg.n_tokens, cfg.n_frames, cfg.omega);
    }
    const BetaBinomialPrior* prior_ptr = cfg.use_prior ? &prior : nullptr;

    DemoReport report;
    report.planted_durations = inst.planted_durations;

    Matrix m = inst.m_enc;
    std::vector<int> stable_durations;
    int stable_count = 0;
    constexpr int kStableSteps = 25;

    for (int step = 0; step < cfg.steps; ++step) {
        AlignmentGradient grad = alignment_gradient(inst.h_enc, m, prior_ptr);
        if (!std::isfinite(grad.total)) {
            report.diverged = true;
            report.divergence_step = step;
            break;
        }
        report.loss_trace.push_back(grad.total);

        if (grad.durations == stable_durations) {
            ++stable_count;
        } else {
            stable_durations = grad.durations;
            stable_count = 1;
        }
        report.recovered_durations = grad.durations;
        if (stable_count >= kStableSteps) {
            report.converged = true;
            report.steps_to_converge = step - kStableSteps + 1;
            break;
        }

        for (std::size_t i = 0; i < m.data.size(); ++i) {
            m.data[i] -= cfg.step_size * grad.d_m_enc.data[i];
        }
    }

    if (report.recovered_durations.empty()) {
        report.recovered_durations.assign(cfg.n_tokens, 0);
    }
    int max_err = 0;
    for (std::size_t i = 0; i < cfg.n_tokens; ++i) {
        max_err = std::max(max_err, std::abs(report.recovered_durations[i] -
                                             report.planted_durations[i]));
    }
    report.max_abs_duration_error = max_err;
    return report;
}

}  // namespace alignkit
