// Acceptance suite: one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "alignkit/binarize.hpp"
#include "alignkit/demo.hpp"
#include "alignkit/features.hpp"
#include "alignkit/forward_sum.hpp"
#include "alignkit/gan_losses.hpp"
#include "alignkit/io.hpp"
#include "alignkit/metrics.hpp"
#include "alignkit/soft_alignment.hpp"
#include "alignkit/variance.hpp"
#include "helpers.hpp"

using namespace alignkit;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail = "") {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

// 1. Forward-sum oracle equivalence, N<=5, T<=8, 50 lattices each, <5s.
void criterion_forward_sum_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(1001);
    double max_err = 0.0;
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::size_t t = n; t <= 8; ++t) {
            for (int trial = 0; trial < 50; ++trial) {
                Matrix lp = testutil::random_log_lattice(n, t, rng);
                const double oracle = testutil::brute_force_log_likelihood(lp);
                const double dp = forward_sum({lp}).log_likelihood;
                max_err = std::max(max_err, std::abs(dp - oracle));
            }
        }
    }
    const double elapsed = seconds_since(start);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |dp - oracle| = %.3g, %.2fs", max_err,
                  elapsed);
    report("1. forward-sum oracle equivalence (<= 1e-9, < 5 s)",
           max_err <= 1e-9 && elapsed < 5.0, buf);
}

// 2. Gradient checks: lattice grad <= 1e-4 rel, end-to-end <= 1e-3 rel.
void criterion_gradients() {
    std::mt19937 rng(1002);
    double max_rel = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Matrix lp = testutil::random_log_lattice(4, 7, rng);
        auto result = forward_sum({lp});
        const double h = 1e-5;
        for (std::size_t i = 0; i < lp.rows; ++i) {
            for (std::size_t j = 0; j < lp.cols; ++j) {
                Matrix plus = lp, minus = lp;
                plus(i, j) += h;
                minus(i, j) -= h;
                const double fd =
                    (forward_sum({plus}).loss - forward_sum({minus}).loss) / (2 * h);
                const double rel = std::abs(result.grad(i, j) - fd) /
                                   std::max(std::abs(fd), 1e-8);
                max_rel = std::max(max_rel, rel);
            }
        }
    }

    DemoConfig cfg;
    cfg.n_tokens = 4;
    cfg.n_frames = 8;
    cfg.dim = 3;
    cfg.seed = 7;
    auto inst = plant_instance(cfg);
    auto grad = alignment_gradient(inst.h_enc, inst.m_enc, nullptr, false);
    double max_rel_e2e = 0.0;
    const double h = 1e-4;
    for (std::size_t j = 0; j < cfg.n_frames; ++j) {
        for (std::size_t c = 0; c < cfg.dim; ++c) {
            Matrix plus = inst.m_enc, minus = inst.m_enc;
            plus(j, c) += h;
            minus(j, c) -= h;
            const double fd =
                (alignment_gradient(inst.h_enc, plus, nullptr, false).forward_sum_loss -
                 alignment_gradient(inst.h_enc, minus, nullptr, false)
                     .forward_sum_loss) /
                (2 * h);
            const double rel = std::abs(grad.d_m_enc(j, c) - fd) /
                               std::max(std::abs(fd), 1e-6);
            max_rel_e2e = std::max(max_rel_e2e, rel);
        }
    }

    char buf[128];
    std::snprintf(buf, sizeof(buf), "lattice rel = %.3g, end-to-end rel = %.3g",
                  max_rel, max_rel_e2e);
    report("2. gradient checks (lattice <= 1e-4, end-to-end <= 1e-3)",
           max_rel <= 1e-4 && max_rel_e2e <= 1e-3, buf);
}

// 3. MAS optimality on 200 random instances, exact, structurally valid.
void criterion_mas() {
    std::mt19937 rng(1003);
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        const std::size_t t = n + rng() % (9 - n);
        Matrix lp = testutil::random_log_lattice(n, t, rng);
        auto [best_score, best_durations] = testutil::brute_force_best_path(lp);
        HardAlignment hard = mas({lp});
        if (hard.durations != best_durations ||
            std::abs(hard.path_score - best_score) > 0.0) {
            ok = false;
        }
        // structural invariants
        int prev = -1;
        for (std::size_t j = 0; j < t && ok; ++j) {
            int token = -1, count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (hard.mask(i, j) != 0.0) {
                    token = static_cast<int>(i);
                    ++count;
                }
            }
            if (count != 1 || (token != prev && token != prev + 1)) ok = false;
            prev = token;
        }
        if (prev != static_cast<int>(n) - 1) ok = false;
        if (std::accumulate(hard.durations.begin(), hard.durations.end(), 0) !=
            static_cast<int>(t)) {
            ok = false;
        }
    }
    report("3. MAS optimality and structure (200 instances, exact)", ok);
}

// 4. Normalization suite, 1000 trials each, 1e-6.
void criterion_normalization() {
    std::mt19937 rng(1004);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    double worst = 0.0;

    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const std::size_t t = n + rng() % 8;

        Matrix d(n, t);
        for (double& v : d.data) v = u(rng);
        auto soft = soft_align(d);
        for (std::size_t j = 0; j < t; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += std::exp(soft.log_probs(i, j));
            worst = std::max(worst, std::abs(col - 1.0));
        }

        auto prior = beta_binomial_prior(n, t, 0.5 + (trial % 4) * 0.5);
        for (std::size_t j = 0; j < t; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += std::exp(prior.log_prior(i, j));
            worst = std::max(worst, std::abs(col - 1.0));
        }

        Matrix lp = testutil::random_log_lattice(n, t, rng);
        auto fs = forward_sum({lp});
        for (std::size_t j = 0; j < t; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += fs.grad(i, j);
            worst = std::max(worst, std::abs(-col - 1.0));
        }

        // gaussian upsampling weight rows: upsample token indicator columns;
        // each output frame then holds its own weight row
        Matrix eye(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
        std::vector<int> durations(n, 1);
        durations[rng() % n] += static_cast<int>(t - n);
        Matrix up = gaussian_upsample(eye, durations, {0.5 + (trial % 3) * 0.5});
        for (std::size_t row = 0; row < up.rows; ++row) {
            double sum = 0.0;
            for (std::size_t ccol = 0; ccol < up.cols; ++ccol) sum += up(row, ccol);
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst deviation = %.3g", worst);
    report("4. normalization suite (1000 trials, 1e-6)", worst <= 1e-6, buf);
}

// 5. Loss identities and the weighted composition value.
void criterion_loss_identities() {
    bool ok = true;

    std::vector<double> zeros(4, 0.0);
    ok &= variance_loss(zeros, zeros, zeros, zeros, zeros, zeros) == 0.0;
    ok &= lsgan_generator_loss({{1, 1, 1}}) == 0.0;
    ok &= lsgan_discriminator_loss({{1, 1}}, {{0, 0}}) == 0.0;

    Matrix f(2, 2, 0.7);
    ok &= feature_matching_loss({{f}}, {{f}}) == 0.0;

    StftConfig cfg;
    auto sine = testutil::make_sine(220.0, 0.3);
    ok &= mel_l1_loss(sine, sine, cfg) == 0.0;

    // one-hot soft equals hard: binarization loss exactly 0
    Matrix lp1(1, 4, 0.0);
    auto align1 = alignment_loss({lp1});
    ok &= align1.bin_loss == 0.0;
    ok &= align1.forward.loss == 0.0;
    ok &= align1.total == 0.0;

    LossWeights w;
    ok &= generator_loss(0, 0, 0, w) == 0.0;
    ok &= total_loss(0, 0, 0, w) == 0.0;
    const double composed = total_loss(1, 2, 3, w);
    ok &= composed == 9.0;

    char buf[64];
    std::snprintf(buf, sizeof(buf), "total_loss(1,2,3) = %g", composed);
    report("5. loss identities and composition (lambda_var=1, lambda_align=2)", ok,
           buf);
}

// 6. Feature pipeline: F0 on sines, frame-count agreement, self metrics.
void criterion_features() {
    StftConfig cfg;
    bool ok = true;
    std::string detail;

    for (double f : {100.0, 150.0, 220.0, 330.0}) {
        auto w = testutil::make_sine(f, 1.0, 0.5);
        std::vector<double> pitch;
        std::vector<bool> voicing;
        extract_f0(w, cfg, pitch, voicing);
        const std::size_t margin = 4;
        for (std::size_t t = margin; t + margin < pitch.size(); ++t) {
            if (!voicing[t] || std::abs(std::exp(pitch[t]) - f) / f > 0.05) {
                ok = false;
                detail = "F0 failure at " + std::to_string(f) + " Hz";
            }
        }
    }

    auto w = testutil::make_sine(220.0, 0.8);
    auto mel = mel_spectrogram(w, cfg);
    auto fv = extract_frame_variance(w, cfg);
    if (mel.frames.rows != fv.pitch.size() || mel.frames.rows != fv.energy.size()) {
        ok = false;
        detail = "frame count mismatch";
    }

    auto self = evaluate_pair(w, w, cfg);
    if (self.mcd != 0.0 || self.f0_rmse != 0.0) {
        ok = false;
        detail = "self metrics not zero";
    }

    auto a = testutil::make_sine(220.0, 1.0);
    auto b = testutil::make_sine(330.0, 1.0);
    const double rmse = log_f0_rmse(a, b, cfg).f0_rmse;
    if (std::abs(rmse - std::log(1.5)) / std::log(1.5) > 0.10) {
        ok = false;
        detail = "220 vs 330 RMSE = " + std::to_string(rmse);
    }
    report("6. feature pipeline (F0 5%, frame counts, self = 0, ln 1.5 within 10%)",
           ok, detail);
}

// 7. Alignment-recovery demo, 20 seeds, < 60 s, prior ablation ordered.
void criterion_demo() {
    const auto start = std::chrono::steady_clock::now();
    int converged = 0;
    long steps_with_prior = 0, steps_without_prior = 0;
    int converged_without = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        DemoConfig cfg;
        cfg.seed = seed;
        auto r = run_demo(cfg);
        if (r.converged && r.max_abs_duration_error <= 1) {
            ++converged;
            steps_with_prior += r.steps_to_converge;
        }
        DemoConfig no_prior = cfg;
        no_prior.use_prior = false;
        auto r2 = run_demo(no_prior);
        if (r2.converged) {
            ++converged_without;
            steps_without_prior += r2.steps_to_converge;
        }
    }
    const double elapsed = seconds_since(start);
    const double mean_with = converged > 0
                                 ? static_cast<double>(steps_with_prior) / converged
                                 : 1e9;
    const double mean_without =
        converged_without > 0
            ? static_cast<double>(steps_without_prior) / converged_without
            : 1e9;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d/20 converged, mean steps prior=%.1f no-prior=%.1f, %.1fs",
                  converged, mean_with, mean_without, elapsed);
    report("7. alignment-recovery demo (>= 18/20, err <= 1, < 60 s, prior faster)",
           converged >= 18 && elapsed < 60.0 && mean_with <= mean_without, buf);
}

// 8. Format round-trip, bit-identical f32 for all kinds.
void criterion_round_trip() {
    std::mt19937 rng(1008);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    bool ok = true;
    const auto dir = std::filesystem::temp_directory_path() / "alignkit_acceptance";
    std::filesystem::create_directories(dir);
    for (const char* kind : {"mel", "pitch", "energy", "voicing", "matrix"}) {
        Matrix m(17, 5);
        for (double& v : m.data) v = u(rng);
        FeatureFileMeta meta;
        meta.kind = kind;
        meta.sample_rate = 22050;
        meta.hop_size = 256;
        const std::string base = (dir / kind).string();
        write_matrix(base, m, meta);
        Matrix r = read_matrix(base);
        write_matrix(base, r, meta);
        Matrix r2 = read_matrix(base);
        for (std::size_t i = 0; i < m.data.size(); ++i) {
            if (r.data[i] != r2.data[i] ||
                static_cast<float>(m.data[i]) != static_cast<float>(r.data[i])) {
                ok = false;
            }
        }
    }
    std::filesystem::remove_all(dir);
    report("8. feature file round-trip (bit-identical f32, all kinds)", ok);
}

}  // namespace

int main() {
    criterion_forward_sum_oracle();
    criterion_gradients();
    criterion_mas();
    criterion_normalization();
    criterion_loss_identities();
    criterion_features();
    criterion_demo();
    criterion_round_trip();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", g_failures);
    return 1;
}
