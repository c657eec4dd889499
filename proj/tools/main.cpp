#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "alignkit/binarize.hpp"
#include "alignkit/demo.hpp"
#include "alignkit/features.hpp"
#include "alignkit/forward_sum.hpp"
#include "alignkit/gan_losses.hpp"
#include "alignkit/io.hpp"
#include "alignkit/metrics.hpp"
#include "alignkit/soft_alignment.hpp"
#include "alignkit/variance.hpp"
#include "alignkit/wav.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

using nlohmann::json;

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open for writing: " + out_path);
        f << j.dump(2) << "\n";
    }
}

struct ExtractArgs {
    std::string wav_path;
    std::string outdir;
    alignkit::StftConfig cfg;
};

int run_extract(const ExtractArgs& args) {
    namespace fs = std::filesystem;
    const alignkit::Waveform w = alignkit::load_wav(args.wav_path);
    fs::create_directories(args.outdir);

    const alignkit::MelSpectrogram mel = alignkit::mel_spectrogram(w, args.cfg);
    const alignkit::FrameVariance fv = alignkit::extract_frame_variance(w, args.cfg);
    const std::size_t T = mel.frames.rows;

    alignkit::FeatureFileMeta meta;
    meta.sample_rate = w.sample_rate;
    meta.hop_size = args.cfg.hop_size;

    const std::string stem = fs::path(args.wav_path).stem().string();
    auto path_for = [&](const char* kind) {
        return (fs::path(args.outdir) / (stem + "." + kind + ".bin")).string();
    };

    meta.kind = "mel";
    alignkit::write_matrix(path_for("mel"), mel.frames, meta);

    alignkit::Matrix col(T, 1);
    meta.kind = "pitch";
    for (std::size_t t = 0; t < T; ++t) col(t, 0) = fv.pitch[t];
    alignkit::write_matrix(path_for("pitch"), col, meta);

    meta.kind = "voicing";
    for (std::size_t t = 0; t < T; ++t) col(t, 0) = fv.voicing[t] ? 1.0 : 0.0;
    alignkit::write_matrix(path_for("voicing"), col, meta);

    meta.kind = "energy";
    for (std::size_t t = 0; t < T; ++t) col(t, 0) = fv.energy[t];
    alignkit::write_matrix(path_for("energy"), col, meta);

    json j;
    j["frames"] = T;
    j["n_mels"] = args.cfg.n_mels;
    j["sample_rate"] = w.sample_rate;
    j["outdir"] = args.outdir;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct AlignArgs {
    std::string h_path;
    std::string m_path;
    std::string out;
    bool use_prior = false;
    double omega = 1.0;
};

int run_align(const AlignArgs& args) {
    const alignkit::Matrix h = alignkit::read_matrix(args.h_path);
    const alignkit::Matrix m = alignkit::read_matrix(args.m_path);
    const alignkit::Matrix dist = alignkit::distance_matrix(h, m);

    alignkit::BetaBinomialPrior prior;
    const alignkit::BetaBinomialPrior* prior_ptr = nullptr;
    if (args.use_prior) {
        prior = alignkit::beta_binomial_prior(h.rows, m.rows, args.omega);
        prior_ptr = &prior;
    }
    const alignkit::SoftAlignment soft = alignkit::soft_align(dist, prior_ptr);
    const alignkit::AlignmentLattice lattice{soft.log_probs};
    const alignkit::AlignmentLossResult result = alignkit::alignment_loss(lattice);

    json j;
    j["durations"] = result.hard.durations;
    j["forward_sum_loss"] = result.forward.loss;
    j["binarization_loss"] = result.bin_loss;
    j["alignment_loss"] = result.total;
    j["log_likelihood"] = result.forward.log_likelihood;
    emit(j, args.out);
    return kExitOk;
}

struct DemoArgs {
    alignkit::DemoConfig cfg;
    int n_seeds = 20;
    std::string out;
};

int run_align_demo(const DemoArgs& args) {
    std::vector<alignkit::DemoReport> reports(static_cast<std::size_t>(args.n_seeds));
    std::vector<std::thread> workers;
    for (int s = 0; s < args.n_seeds; ++s) {
        workers.emplace_back([&, s] {
            alignkit::DemoConfig cfg = args.cfg;
            cfg.seed = args.cfg.seed + static_cast<uint64_t>(s);
            reports[static_cast<std::size_t>(s)] = alignkit::run_demo(cfg);
        });
    }
    for (auto& t : workers) t.join();

    json runs = json::array();
    int converged = 0;
    for (int s = 0; s < args.n_seeds; ++s) {
        const auto& r = reports[static_cast<std::size_t>(s)];
        json jr;
        jr["seed"] = args.cfg.seed + static_cast<uint64_t>(s);
        jr["planted_durations"] = r.planted_durations;
        jr["recovered_durations"] = r.recovered_durations;
        jr["max_abs_duration_error"] = r.max_abs_duration_error;
        jr["converged"] = r.converged;
        jr["steps_to_converge"] = r.steps_to_converge;
        jr["diverged"] = r.diverged;
        if (r.diverged) jr["divergence_step"] = r.divergence_step;
        jr["initial_loss"] = r.loss_trace.empty() ? 0.0 : r.loss_trace.front();
        jr["final_loss"] = r.loss_trace.empty() ? 0.0 : r.loss_trace.back();
        runs.push_back(jr);
        if (r.converged) ++converged;
    }
    json j;
    j["runs"] = runs;
    j["n_converged"] = converged;
    j["n_seeds"] = args.n_seeds;
    emit(j, args.out);
    return kExitOk;
}

struct UpsampleArgs {
    std::string h_path;
    std::string durations_path;
    std::string out = "upsampled.bin";
    double sigma = 1.0;
    bool repeat = false;
};

int run_upsample(const UpsampleArgs& args) {
    const alignkit::Matrix h = alignkit::read_matrix(args.h_path);
    std::ifstream f(args.durations_path);
    if (!f) throw std::runtime_error("cannot open: " + args.durations_path);
    json jd;
    f >> jd;
    std::vector<int> durations;
    if (jd.is_array()) {
        durations = jd.get<std::vector<int>>();
    } else if (jd.contains("durations")) {
        durations = jd["durations"].get<std::vector<int>>();
    } else {
        throw std::runtime_error("durations JSON must be an array");
    }

    alignkit::Matrix up;
    if (args.repeat) {
        up = alignkit::repeat_upsample(h, durations);
    } else {
        up = alignkit::gaussian_upsample(h, durations, {args.sigma});
    }
    alignkit::FeatureFileMeta meta;
    meta.kind = "matrix";
    alignkit::write_matrix(args.out, up, meta);

    json j;
    j["rows"] = up.rows;
    j["cols"] = up.cols;
    j["out"] = args.out;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

struct PairArgs {
    std::string ref_path;
    std::string syn_path;
    alignkit::StftConfig cfg;
    std::string out;
};

int run_mel_l1(const PairArgs& args) {
    const alignkit::Waveform ref = alignkit::load_wav(args.ref_path);
    const alignkit::Waveform syn = alignkit::load_wav(args.syn_path);
    const double loss = alignkit::mel_l1_loss(ref, syn, args.cfg);
    json j;
    j["mel_l1"] = loss;
    emit(j, args.out);
    return kExitOk;
}

int run_metric(const PairArgs& args, const std::string& which) {
    const alignkit::Waveform ref = alignkit::load_wav(args.ref_path);
    const alignkit::Waveform syn = alignkit::load_wav(args.syn_path);
    const alignkit::MetricReport report = alignkit::evaluate_pair(ref, syn, args.cfg);
    json j;
    if (which == "mcd") {
        j["mcd"] = report.mcd;
        j["n_aligned_frames"] = report.n_aligned_frames;
    } else {
        j["f0_rmse"] = report.f0_rmse;
        j["n_voiced_pairs"] = report.n_voiced_pairs;
    }
    emit(j, args.out);
    return kExitOk;
}

void add_stft_options(CLI::App* cmd, alignkit::StftConfig& cfg) {
    cmd->add_option("--fft", cfg.fft_size, "FFT size");
    cmd->add_option("--hop", cfg.hop_size, "hop size in samples");
    cmd->add_option("--mels", cfg.n_mels, "number of mel bins");
    cmd->add_option("--fmin", cfg.fmin, "mel filterbank lower edge (Hz)");
    cmd->add_option("--fmax", cfg.fmax, "mel filterbank upper edge (Hz, 0 = sr/2)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alignment-learning and TTS front-end math toolkit"};
    app.require_subcommand(1);

    ExtractArgs extract_args;
    auto* extract = app.add_subcommand("extract", "extract mel/pitch/energy features");
    extract->add_option("--wav", extract_args.wav_path, "input WAV file")->required();
    extract->add_option("--outdir", extract_args.outdir, "output directory")->required();
    add_stft_options(extract, extract_args.cfg);

    AlignArgs align_args;
    auto* align = app.add_subcommand("align", "align token and frame embeddings");
    align->set_help_flag("--help", "print help");  // frees -h for --h
    align->add_option("--h", align_args.h_path, "token embedding matrix (N x dim)")
        ->required();
    align->add_option("--m", align_args.m_path, "frame embedding matrix (T x dim)")
        ->required();
    align->add_flag("--prior", align_args.use_prior, "apply beta-binomial prior");
    align->add_option("--omega", align_args.omega, "prior scaling factor");
    align->add_option("--out", align_args.out, "write JSON here instead of stdout");

    DemoArgs demo_args;
    auto* demo = app.add_subcommand("align-demo", "synthetic alignment-recovery demo");
    demo->add_option("--tokens", demo_args.cfg.n_tokens, "token count");
    demo->add_option("--frames", demo_args.cfg.n_frames, "frame count");
    demo->add_option("--dim", demo_args.cfg.dim, "embedding width");
    demo->add_option("--steps", demo_args.cfg.steps, "iteration cap");
    demo->add_option("--lr", demo_args.cfg.step_size, "step size");
    demo->add_option("--seed", demo_args.cfg.seed, "base RNG seed");
    demo->add_option("--seeds", demo_args.n_seeds, "number of seeds to run");
    demo->add_option("--omega", demo_args.cfg.omega, "prior scaling factor");
    demo->add_option("--noise", demo_args.cfg.noise_scale, "frame noise scale");
    bool no_prior = false;
    demo->add_flag("--no-prior", no_prior, "disable the beta-binomial prior");
    demo->add_option("--out", demo_args.out, "write JSON here instead of stdout");

    UpsampleArgs upsample_args;
    auto* upsample = app.add_subcommand("upsample", "expand token embeddings to frames");
    upsample->set_help_flag("--help", "print help");
    upsample->add_option("--h", upsample_args.h_path, "token embedding matrix")
        ->required();
    upsample->add_option("--durations", upsample_args.durations_path,
                         "durations JSON file")
        ->required();
    upsample->add_option("--out", upsample_args.out, "output matrix path");
    upsample->add_option("--sigma", upsample_args.sigma, "gaussian temperature");
    upsample->add_flag("--repeat", upsample_args.repeat,
                       "vanilla repetition instead of gaussian");

    PairArgs losses_args;
    auto* losses = app.add_subcommand("losses", "evaluate losses between WAV files");
    losses->require_subcommand(1);
    auto* mel_l1 = losses->add_subcommand("mel-l1", "mel-spectrogram L1 loss");
    mel_l1->add_option("--ref", losses_args.ref_path, "reference WAV")->required();
    mel_l1->add_option("--syn", losses_args.syn_path, "synthesized WAV")->required();
    add_stft_options(mel_l1, losses_args.cfg);
    mel_l1->add_option("--out", losses_args.out, "write JSON here instead of stdout");

    PairArgs metrics_args;
    auto* metrics = app.add_subcommand("metrics", "objective evaluation metrics");
    metrics->require_subcommand(1);
    CLI::App* metric_cmds[2];
    metric_cmds[0] = metrics->add_subcommand("mcd", "mel-cepstral distortion");
    metric_cmds[1] = metrics->add_subcommand("f0rmse", "log-F0 RMSE");
    for (auto* cmd : metric_cmds) {
        cmd->add_option("--ref", metrics_args.ref_path, "reference WAV")->required();
        cmd->add_option("--syn", metrics_args.syn_path, "synthesized WAV")->required();
        add_stft_options(cmd, metrics_args.cfg);
        cmd->add_flag("--json", "emit JSON (always on; kept for compatibility)");
        cmd->add_option("--out", metrics_args.out, "write JSON here instead of stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*extract) return run_extract(extract_args);
        if (*align) return run_align(align_args);
        if (*demo) {
            demo_args.cfg.use_prior = !no_prior;
            return run_align_demo(demo_args);
        }
        if (*upsample) return run_upsample(upsample_args);
        if (*losses) return run_mel_l1(losses_args);
        if (*metrics) {
            return run_metric(metrics_args, (*metric_cmds[0]) ? "mcd" : "f0rmse");
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const alignkit::WavError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
