// Command-line front end: track, eval, ablate, synth, plot.
//
// Exit codes: 0 success, 2 input error, 3 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include <amcf/bench/ablation.hpp>
#include <amcf/bench/config.hpp>
#include <amcf/bench/ope.hpp>
#include <amcf/bench/report.hpp>
#include <amcf/bench/sequence.hpp>
#include <amcf/bench/synth_io.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

using namespace amcf;
using namespace amcf::bench;

struct CommonOptions {
    std::string config_file;
    Toggles toggles;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_file, "Tracker configuration (key = value)")->check(CLI::ExistingFile);
    cmd->add_flag("--no-memory", opts.toggles.no_memory, "Disable augmented memory (lambda2 = 0)");
    cmd->add_flag("--no-context", opts.toggles.no_context, "Disable compressed context (lambda3 = 0)");
    cmd->add_flag("--no-channel-weights", opts.toggles.no_channel_weights, "Freeze channel weights (eta = 0)");
}

TrackerConfig resolve_config(const CommonOptions& opts) {
    TrackerConfig c = opts.config_file.empty() ? TrackerConfig{} : load_config(opts.config_file);
    c = apply_toggles(c, opts.toggles);
    validate(c);
    return c;
}

void print_summary(const EvalReport& r) {
    std::printf("%s: precision@20=%.3f auc=%.3f mean_iou=%.3f fps=%.1f\n", r.sequence.c_str(), r.precision_20, r.auc,
                r.mean_iou, r.fps);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Augmented-memory correlation filter tracker and benchmark harness"};
    app.require_subcommand(1);

    CommonOptions track_opts;
    std::string track_seq, track_out, track_report;
    auto* track = app.add_subcommand("track", "Run one-pass evaluation on a sequence");
    track->add_option("seq", track_seq, "Sequence directory or manifest")->required();
    track->add_option("--out", track_out, "Results file (x,y,w,h per frame)");
    track->add_option("--report", track_report, "Write the evaluation report as JSON");
    add_common(track, track_opts);

    std::string eval_seq, eval_results, eval_report;
    auto* eval = app.add_subcommand("eval", "Score a results file against ground truth");
    eval->add_option("seq", eval_seq, "Sequence directory or manifest")->required();
    eval->add_option("results", eval_results, "Results file")->required()->check(CLI::ExistingFile);
    eval->add_option("--report", eval_report, "Write the evaluation report as JSON");

    CommonOptions ablate_opts;
    std::vector<std::string> ablate_seqs;
    int ablate_repeats = 1;
    std::string ablate_out;
    auto* ablate = app.add_subcommand("ablate", "Module ablation table over one or more sequences");
    ablate->add_option("seqs", ablate_seqs, "Sequence directories or manifests")->required();
    ablate->add_option("--repeats", ablate_repeats, "Timing repetitions per run (best FPS kept)")->check(CLI::PositiveNumber);
    ablate->add_option("--out", ablate_out, "Write the table as CSV");
    add_common(ablate, ablate_opts);

    std::string synth_spec, synth_out;
    auto* synth = app.add_subcommand("synth", "Render a synthetic sequence from a JSON spec");
    synth->add_option("spec", synth_spec, "Synthetic sequence spec (JSON)")->required()->check(CLI::ExistingFile);
    synth->add_option("outdir", synth_out, "Output directory")->required();

    std::string plot_report, plot_prefix;
    auto* plot = app.add_subcommand("plot", "Emit CSV curve data and an SVG precision/success plot");
    plot->add_option("report", plot_report, "Evaluation report (JSON)")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", plot_prefix, "Output prefix (default: report path without extension)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*track) {
            const TrackerConfig config = resolve_config(track_opts);
            const SequenceManifest m = load_sequence(track_seq);
            const fs::path out = track_out.empty() ? fs::path(m.name + "_results.txt") : fs::path(track_out);
            const OpeResult r = run_ope(config, source_of(m), out);
            print_summary(r.report);
            if (!track_report.empty()) save_report(track_report, r.report);
        } else if (*eval) {
            const SequenceManifest m = load_sequence(eval_seq);
            const EvalReport r = evaluate_results(m, eval_results);
            print_summary(r);
            if (!eval_report.empty()) save_report(eval_report, r);
        } else if (*ablate) {
            const TrackerConfig config = resolve_config(ablate_opts);
            const bool custom = ablate_opts.toggles.no_memory || ablate_opts.toggles.no_context ||
                                ablate_opts.toggles.no_channel_weights;
            std::vector<AblationVariant> variants;
            if (custom) {
                const TrackerConfig full = ablate_opts.config_file.empty() ? TrackerConfig{} : load_config(ablate_opts.config_file);
                variants = {{"AMCF", full}, {"ablated", config}};
            } else {
                variants = standard_variants(config);
            }
            std::vector<SequenceManifest> manifests;
            for (const auto& s : ablate_seqs) manifests.push_back(load_sequence(s));
            std::vector<SequenceSource> sources;
            for (const auto& m : manifests) sources.push_back(source_of(m));
            const std::string table = format_ablation(run_ablation(variants, sources, ablate_repeats));
            std::cout << table;
            if (!ablate_out.empty()) std::ofstream(ablate_out) << table;
        } else if (*synth) {
            const SequenceManifest m = write_synth_sequence(load_synth_spec(synth_spec), synth_out);
            std::printf("wrote %zu frames to %s\n", m.size(), synth_out.c_str());
        } else if (*plot) {
            const EvalReport r = load_report(plot_report);
            const fs::path prefix = plot_prefix.empty() ? fs::path(plot_report).replace_extension("") : fs::path(plot_prefix);
            std::ofstream(prefix.string() + ".csv") << curves_csv(r);
            std::ofstream(prefix.string() + ".svg") << plot_svg(r);
            std::printf("wrote %s.csv and %s.svg\n", prefix.string().c_str(), prefix.string().c_str());
        }
    } catch (const amcf::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_input_error() ? kExitInput : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
