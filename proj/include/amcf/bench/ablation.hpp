#ifndef AMCF_BENCH_ABLATION_HPP
#define AMCF_BENCH_ABLATION_HPP

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "ope.hpp"

namespace amcf::bench {

struct AblationVariant {
    std::string name;
    TrackerConfig config;
};

struct Toggles {
    bool no_memory = false;
    bool no_context = false;
    bool no_channel_weights = false;
};

inline TrackerConfig apply_toggles(TrackerConfig c, const Toggles& t) {
    if (t.no_memory) c.lambda2 = 0.0;
    if (t.no_context) c.lambda3 = 0.0;
    if (t.no_channel_weights) c.eta = 0.0;
    return c;
}

/// The five module combinations: full, +CW+CC, +CC+AM, +CW, baseline
/// (CW channel weights, CC compressed context, AM augmented memory).
inline std::vector<AblationVariant> standard_variants(const TrackerConfig& full) {
    return {
        {"AMCF", full},
        {"Baseline+CW+CC", apply_toggles(full, {true, false, false})},
        {"Baseline+CC+AM", apply_toggles(full, {false, false, true})},
        {"Baseline+CW", apply_toggles(full, {true, true, false})},
        {"Baseline", apply_toggles(full, {true, true, true})},
    };
}

struct AblationRow {
    std::string name;
    double precision = 0.0;
    double auc = 0.0;
    double fps = 0.0;
    /// Predicted boxes per sequence, from the first repetition.
    std::vector<std::vector<BBox>> trajectories;
};

/// Runs every variant over every sequence. Precision, AUC and FPS are averaged over
/// sequences; per sequence the FPS is the best of `repeats` runs (repetitions are
/// interleaved across variants).
inline std::vector<AblationRow> run_ablation(const std::vector<AblationVariant>& variants,
                                             const std::vector<SequenceSource>& sequences, int repeats = 1) {
    repeats = std::max(1, repeats);
    std::vector<AblationRow> rows(variants.size());
    std::vector<std::vector<double>> best_fps(variants.size(), std::vector<double>(sequences.size(), 0.0));
    for (int rep = 0; rep < repeats; ++rep)
        for (std::size_t v = 0; v < variants.size(); ++v)
            for (std::size_t s = 0; s < sequences.size(); ++s) {
                const OpeResult r = run_ope(variants[v].config, sequences[s]);
                best_fps[v][s] = std::max(best_fps[v][s], r.report.fps);
                if (rep == 0) {
                    rows[v].precision += r.report.precision_20;
                    rows[v].auc += r.report.auc;
                    rows[v].trajectories.push_back(r.predictions);
                }
            }
    const double n = static_cast<double>(std::max<std::size_t>(1, sequences.size()));
    for (std::size_t v = 0; v < variants.size(); ++v) {
        rows[v].name = variants[v].name;
        rows[v].precision /= n;
        rows[v].auc /= n;
        for (double f : best_fps[v]) rows[v].fps += f / n;
    }
    return rows;
}

inline std::string format_ablation(const std::vector<AblationRow>& rows) {
    std::string out = "variant,precision,auc,fps\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.1f,%.1f,%.1f\n", r.name.c_str(), 100.0 * r.precision, 100.0 * r.auc, r.fps);
        out += buf;
    }
    return out;
}

} // namespace amcf::bench

#endif
