#ifndef AMCF_BENCH_OPE_HPP
#define AMCF_BENCH_OPE_HPP

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "../tracker.hpp"
#include "metrics.hpp"
#include "sequence.hpp"
#include "synth.hpp"

namespace amcf::bench {

/// Random-access frame provider plus ground truth, independent of where frames live.
struct SequenceSource {
    std::string name;
    std::size_t size = 0;
    std::function<GrayImage(std::size_t)> frame;
    std::vector<std::optional<BBox>> groundtruth;
};

inline SequenceSource source_of(const SequenceManifest& m) {
    return {m.name, m.size(), [frames = m.frames](std::size_t i) { return read_frame(frames.at(i)); }, m.groundtruth};
}

/// Shares the rendered frames; the sequence must outlive the source.
inline SequenceSource source_of(const SynthSequence& s) {
    SequenceSource src{s.name, s.frames.size(), [&s](std::size_t i) { return s.frames.at(i); }, {}};
    for (const auto& b : s.groundtruth) src.groundtruth.push_back(b);
    return src;
}

struct OpeResult {
    EvalReport report;
    std::vector<BBox> predictions;
};

/// One-pass evaluation: initialise on the first ground-truth box, never re-initialise.
/// FPS covers step() calls only. If tracking fails, the predictions made so far are
/// written to `results` before the error propagates.
inline OpeResult run_ope(const TrackerConfig& config, const SequenceSource& seq,
                         const std::optional<fs::path>& results = std::nullopt) {
    if (seq.size == 0 || seq.groundtruth.empty() || !seq.groundtruth.front())
        fail(ErrorKind::MissingFrames, "sequence '" + seq.name + "' has no usable first frame");

    OpeResult out;
    out.predictions.reserve(seq.size);
    std::chrono::steady_clock::duration tracking{};
    try {
        TrackState state = init(seq.frame(0), *seq.groundtruth.front(), config);
        out.predictions.push_back(state.bbox);
        for (std::size_t i = 1; i < seq.size; ++i) {
            const GrayImage frame = seq.frame(i);
            const auto t0 = std::chrono::steady_clock::now();
            const BBox box = step(state, frame);
            tracking += std::chrono::steady_clock::now() - t0;
            out.predictions.push_back(box);
        }
    } catch (...) {
        if (results)
            write_boxes(*results, out.predictions);
        throw;
    }
    if (results)
        write_boxes(*results, out.predictions);

    out.report = evaluate(out.predictions, seq.groundtruth);
    out.report.sequence = seq.name;
    const double seconds = std::chrono::duration<double>(tracking).count();
    out.report.fps = seq.size > 1 && seconds > 0.0 ? static_cast<double>(seq.size - 1) / seconds : 0.0;
    return out;
}

/// Scores an existing results file against a sequence's ground truth (no FPS).
inline EvalReport evaluate_results(const SequenceManifest& m, const fs::path& results) {
    const auto boxes = read_boxes(results);
    std::vector<BBox> predictions;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        if (!boxes[i])
            fail(ErrorKind::MalformedGroundTruth, "results line " + std::to_string(i + 1) + " has no box");
        predictions.push_back(*boxes[i]);
    }
    if (predictions.size() != m.groundtruth.size())
        fail(ErrorKind::MalformedGroundTruth, "results have " + std::to_string(predictions.size()) + " lines, sequence has " +
                                                  std::to_string(m.groundtruth.size()) + " frames");
    EvalReport r = evaluate(predictions, m.groundtruth);
    r.sequence = m.name;
    return r;
}

} // namespace amcf::bench

#endif
