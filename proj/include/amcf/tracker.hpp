#ifndef AMCF_TRACKER_HPP
#define AMCF_TRACKER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "context.hpp"
#include "features.hpp"
#include "filter.hpp"
#include "imaging.hpp"
#include "memory.hpp"
#include "phash.hpp"
#include "transforms.hpp"

namespace amcf {

struct TrackerConfig {
    // filter
    double lambda1 = 1e-2;
    double lambda2 = 0.15;
    double lambda3 = 0.5;
    double gamma = 0.02;
    double eta = 0.02;
    // memory
    double nu = 0.95;
    double mu = 1.05;
    double phi = 0.7;
    double varphi = 1.5;
    double tau = 0.5;
    int K = 5;
    // geometry
    int cell = 4;
    double search_scale = 2.5;
    double context_scale = 2.0;
    double sigma_factor = 0.1;
    /// Upper bound on the resampled search patch side, in pixels.
    int max_patch = 192;
    // scale search
    int scale_count = 3;
    double scale_step = 1.02;
    /// Raise on imaginary residue in detection responses.
    bool strict = false;

    FilterParams filter_params() const { return {lambda1, lambda2, lambda3, gamma, eta}; }
};

inline void validate(const TrackerConfig& c) {
    validate(c.filter_params());
    validate_ladder_params({1.0, 1.0, c.K, c.nu, c.mu, c.phi, c.varphi});
    if (!(c.tau >= 0.0 && c.tau <= 1.0))
        fail(ErrorKind::ParameterConstraintViolation, "tau must lie in [0,1]");
    if (c.cell < 1)
        fail(ErrorKind::ParameterConstraintViolation, "cell must be positive");
    if (!(c.search_scale > 1.0))
        fail(ErrorKind::ParameterConstraintViolation, "search_scale must exceed 1");
    if (!(c.context_scale > 1.0))
        fail(ErrorKind::ParameterConstraintViolation, "context_scale must exceed 1");
    if (!(c.sigma_factor > 0.0))
        fail(ErrorKind::ParameterConstraintViolation, "sigma_factor must be positive");
    if (c.scale_count < 1 || c.scale_count % 2 == 0)
        fail(ErrorKind::ParameterConstraintViolation, "scale_count must be a positive odd number");
    if (!(c.scale_step > 1.0) && c.scale_count > 1)
        fail(ErrorKind::ParameterConstraintViolation, "scale_step must exceed 1");
    if (c.max_patch < 4 * c.cell)
        fail(ErrorKind::ParameterConstraintViolation, "max_patch must hold at least four cells");
}

/// Fixed sampling geometry chosen at initialisation.
struct SearchGeometry {
    /// Search-square side in frame pixels at scale 1.
    double base_side = 0.0;
    /// Resampled patch side in pixels; rows = cols = patch_side / cell.
    int patch_side = 0;
    int cell = 4;

    int cells() const noexcept { return patch_side / cell; }
};

/// Desired-response spectra matching the ladder.
struct LabelSpectra {
    Spectrum current;
    Spectrum anchor;
    std::vector<Spectrum> slots; // slot k at index k-1
};

struct TrackState {
    TrackerConfig config;
    BBox bbox;
    /// Target size at frame 1; bbox size = base size * scale.
    double base_w = 0.0;
    double base_h = 0.0;
    double scale = 1.0;
    SearchGeometry geometry;
    CosineWindow window;
    ResponseLadder ladder;
    LabelSpectra labels;
    MemoryQueue memory;
    FilterState filter;
    int frame_index = 0;

    /// Diagnostics from the last step.
    double last_peak = 0.0;
    double last_admission_score = 0.0;
    std::uint64_t last_transform_count = 0;
};

namespace detail {

inline double search_side(const TrackState& s) { return s.geometry.base_side * s.scale; }

inline FeatureMap sample_features(const GrayImage& frame, double cx, double cy, double side, const SearchGeometry& g,
                                  const CosineWindow& window) {
    const GrayImage patch = extract_patch(frame, {cx, cy, side, side}, g.patch_side, g.patch_side);
    return apply_window(compute_features(patch, g.cell), window);
}

inline HashMatrix object_hash(const GrayImage& frame, const BBox& box) {
    return hash_view(extract_patch(frame, box, phash::kResizeSide, phash::kResizeSide));
}

inline std::optional<SampleSpectra> context_spectra(const TrackState& s, const GrayImage& frame) {
    if (s.config.lambda3 == 0.0)
        return std::nullopt;
    const ContextGeometry g{search_side(s), s.geometry.patch_side, s.config.context_scale, s.geometry.cell};
    return spectra_of(compressed_context_features(frame, s.bbox, g, s.window));
}

inline std::vector<LabeledSpectra> memory_samples(const TrackState& s) {
    std::vector<LabeledSpectra> out;
    if (s.config.lambda2 == 0.0)
        return out;
    for (const auto& v : training_views(s.memory, s.ladder)) {
        const Spectrum& label = v.slot == 0 ? s.labels.anchor : s.labels.slots[static_cast<std::size_t>(v.slot - 1)];
        out.push_back({std::cref(v.view.get().spectra), std::cref(label)});
    }
    return out;
}

} // namespace detail

/// Frame-1 initialisation: anchor view, label ladder, filter trained on the first sample
/// (with context), uniform channel weights.
inline TrackState init(const GrayImage& frame, const BBox& groundtruth, const TrackerConfig& config) {
    validate(config);
    if (frame.empty())
        fail(ErrorKind::InvalidInput, "empty first frame");
    if (!groundtruth.valid())
        fail(ErrorKind::InvalidInput, "degenerate ground-truth box");
    if (groundtruth.cx < 0.0 || groundtruth.cy < 0.0 || groundtruth.cx > frame.width() || groundtruth.cy > frame.height())
        fail(ErrorKind::InvalidInput, "ground-truth box centre outside the frame");

    TrackState s;
    s.config = config;
    s.bbox = groundtruth;
    s.base_w = groundtruth.w;
    s.base_h = groundtruth.h;

    const int cell = config.cell;
    const double side = std::min({config.search_scale * std::sqrt(groundtruth.w * groundtruth.h),
                                  static_cast<double>(frame.width()), static_cast<double>(frame.height())});
    const double patch_target = std::min(side, static_cast<double>(config.max_patch));
    const int pairs = std::max(2, static_cast<int>(std::lround(patch_target / (2.0 * cell))));
    s.geometry = {side, pairs * 2 * cell, cell};

    const int n = s.geometry.cells();
    s.window = CosineWindow(n, n);

    const double px_scale = s.geometry.patch_side / side;
    const double obj_cells = std::sqrt((groundtruth.w * px_scale / cell) * (groundtruth.h * px_scale / cell));
    s.ladder = build_ladder({obj_cells * config.sigma_factor, 1.0, config.K, config.nu, config.mu, config.phi, config.varphi},
                            n, n);
    s.labels.current = transforms::dft2(s.ladder.current());
    s.labels.anchor = transforms::dft2(s.ladder.anchor());
    for (int k = 1; k <= config.K; ++k) s.labels.slots.push_back(transforms::dft2(s.ladder.slot(k)));

    StoredView anchor;
    anchor.features = detail::sample_features(frame, groundtruth.cx, groundtruth.cy, side, s.geometry, s.window);
    anchor.spectra = spectra_of(anchor.features);
    anchor.hash = detail::object_hash(frame, groundtruth);
    anchor.frame_index = 0;

    const auto context = detail::context_spectra(s, frame);
    const TrainingTerms terms =
        train_terms(anchor.spectra, s.labels.current, {}, context ? &*context : nullptr, config.lambda2);
    s.filter = init_state(terms, config.filter_params());
    s.memory = MemoryQueue(std::move(anchor), config.K);
    s.frame_index = 0;
    return s;
}

/// One tracking cycle: detect at the previous location (over the scale pyramid), move,
/// resample, consider the view for memory, retrain and re-weight channels.
inline BBox step(TrackState& s, const GrayImage& frame) {
    if (s.filter.filter.empty())
        fail(ErrorKind::InvalidInput, "tracker not initialised");
    if (frame.empty())
        fail(ErrorKind::FrameUnavailable, "empty frame");
    const auto transforms_before = transforms::transform_count();
    const TrackerConfig& cfg = s.config;
    const SearchGeometry& g = s.geometry;

    // Detection with the previous filter.
    const int half = cfg.scale_count / 2;
    double best_peak = -std::numeric_limits<double>::infinity();
    double best_factor = 1.0;
    double best_dx = 0.0, best_dy = 0.0;
    for (int i = -half; i <= half; ++i) {
        const double factor = std::pow(cfg.scale_step, i);
        const double side = detail::search_side(s) * factor;
        const FeatureMap z = detail::sample_features(frame, s.bbox.cx, s.bbox.cy, side, g, s.window);
        const ResponseMap r = detect(s.filter, spectra_of(z));
        if (cfg.strict && r.max_imag_residue > 1e-6 * std::max(max_abs(r.values), 1e-300))
            fail(ErrorKind::ImaginaryResidueExceeded, "detection response not real");
        if (r.peak_value > best_peak) {
            best_peak = r.peak_value;
            best_factor = factor;
            const double px_per_cell = g.cell * side / g.patch_side;
            best_dx = r.shift_cols * px_per_cell;
            best_dy = r.shift_rows * px_per_cell;
        }
    }
    s.last_peak = best_peak;
    s.scale = std::clamp(s.scale * best_factor, 0.2, 5.0);
    s.bbox.cx = std::clamp(s.bbox.cx + best_dx, 0.0, static_cast<double>(frame.width()));
    s.bbox.cy = std::clamp(s.bbox.cy + best_dy, 0.0, static_cast<double>(frame.height()));
    s.bbox.w = s.base_w * s.scale;
    s.bbox.h = s.base_h * s.scale;
    ++s.frame_index;

    // New training sample at the updated location.
    const FeatureMap x = detail::sample_features(frame, s.bbox.cx, s.bbox.cy, detail::search_side(s), g, s.window);
    SampleSpectra x_hat = spectra_of(x);
    const auto context = detail::context_spectra(s, frame);

    if (cfg.lambda2 != 0.0) {
        StoredView candidate{x, detail::object_hash(frame, s.bbox), s.frame_index, x_hat};
        s.last_admission_score = maybe_admit(s.memory, std::move(candidate), cfg.tau).score;
    }

    const auto views = detail::memory_samples(s);
    const TrainingTerms terms = train_terms(x_hat, s.labels.current, views, context ? &*context : nullptr, cfg.lambda2);
    update_state(s.filter, terms, cfg.gamma);
    update_channel_weights(s.filter, x_hat, cfg.eta);

    s.last_transform_count = transforms::transform_count() - transforms_before;
    return s.bbox;
}

/// Convenience wrapper owning the state.
class Tracker {
public:
    explicit Tracker(TrackerConfig config = {}) : config_(config) { validate(config_); }

    void init(const GrayImage& frame, const BBox& groundtruth) { state_ = amcf::init(frame, groundtruth, config_); }
    BBox update(const GrayImage& frame) { return step(state_, frame); }

    const TrackState& state() const noexcept { return state_; }
    const TrackerConfig& config() const noexcept { return config_; }

private:
    TrackerConfig config_;
    TrackState state_;
};

} // namespace amcf

#endif
