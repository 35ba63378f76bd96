// Tracks a rendered synthetic sequence in memory and prints per-frame errors.
#include <chrono>
#include <cstdio>

#include <amcf/bench/metrics.hpp>
#include <amcf/bench/synth.hpp>
#include <amcf/tracker.hpp>

int main(int argc, char** argv) {
    amcf::bench::SynthSpec spec;
    if (argc > 1) spec.seed = std::stoull(argv[1]);
    const auto seq = amcf::bench::synth_sequence(spec);

    amcf::Tracker tracker;
    tracker.init(seq.frames[0], seq.groundtruth[0]);

    double total_error = 0.0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t f = 1; f < seq.frames.size(); ++f) {
        const amcf::BBox box = tracker.update(seq.frames[f]);
        const double err = amcf::bench::center_error(box, seq.groundtruth[f]);
        total_error += err;
        std::printf("%3zu  cle=%6.2f  iou=%.3f  scale=%.3f\n", f, err, amcf::bench::iou(box, seq.groundtruth[f]),
                    tracker.state().scale);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("mean cle %.3f px, %.1f fps\n", total_error / (seq.frames.size() - 1), (seq.frames.size() - 1) / secs);
}
