#ifndef AMCF_BENCH_SYNTH_HPP
#define AMCF_BENCH_SYNTH_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "../imaging.hpp"

// Deterministic synthetic sequences: a textured square moving over a cluttered static
// background, with optional texture switches, full-occlusion windows and sensor noise.
// Frame indices are 0-based throughout.

namespace amcf::bench {

struct TextureSwitch {
    int frame = 0;
    /// Texture id: 0 is the initial appearance, others are independent textures.
    int texture = 0;
};

struct SynthSpec {
    std::string name = "synthetic";
    int width = 640;
    int height = 360;
    int frames = 100;
    double object_w = 60.0;
    double object_h = 60.0;
    /// Object centre at frame 0.
    double start_x = 160.0;
    double start_y = 180.0;
    /// Displacement per frame in pixels.
    double velocity_x = 2.0;
    double velocity_y = 0.0;
    /// Inclusive [first, last] frame windows during which an occluder covers the object.
    std::vector<std::pair<int, int>> occlusions;
    std::vector<TextureSwitch> texture_switches;
    double noise = 0.01;
    /// Number of clutter rectangles in the background.
    int clutter = 150;
    std::uint64_t seed = 1;
};

struct SynthSequence {
    std::string name;
    std::vector<GrayImage> frames;
    std::vector<BBox> groundtruth;
    std::vector<bool> occluded;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Blocky random texture with a few bright/dark strokes; values in [0.05, 0.95].
inline Plane object_texture(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> level(0.05, 0.95);
    Plane t(h, w);
    const int block = 6;
    const int bw = (w + block - 1) / block;
    const int bh = (h + block - 1) / block;
    std::vector<double> blocks(static_cast<std::size_t>(bw * bh));
    for (auto& b : blocks) b = level(rng);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) t(y, x) = blocks[static_cast<std::size_t>((y / block) * bw + x / block)];
    std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1);
    for (int s = 0; s < 6; ++s) {
        const double v = s % 2 == 0 ? 0.95 : 0.05;
        const int x0 = px(rng), y0 = py(rng);
        const bool horizontal = (rng() & 1u) != 0;
        for (int i = 0; i < std::max(w, h) / 2; ++i) {
            const int x = horizontal ? std::min(w - 1, x0 + i) : x0;
            const int y = horizontal ? y0 : std::min(h - 1, y0 + i);
            t(y, x) = v;
            if (horizontal && y + 1 < h) t(y + 1, x) = v;
            if (!horizontal && x + 1 < w) t(y, x + 1) = v;
        }
    }
    return t;
}

inline Plane clutter_background(int w, int h, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> level(0.15, 0.85);
    Plane bg(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) bg(y, x) = 0.35 + 0.3 * x / std::max(1, w - 1);
    std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1), size(8, 70);
    for (int i = 0; i < count; ++i) {
        const int x0 = px(rng), y0 = py(rng), rw = size(rng), rh = size(rng);
        const double v = level(rng);
        for (int y = y0; y < std::min(h, y0 + rh); ++y)
            for (int x = x0; x < std::min(w, x0 + rw); ++x) bg(y, x) = v;
    }
    return bg;
}

inline double sample_clamped(const Plane& t, double x, double y) {
    const double fx = std::floor(x), fy = std::floor(y);
    const int x0 = std::clamp(static_cast<int>(fx), 0, t.cols() - 1);
    const int y0 = std::clamp(static_cast<int>(fy), 0, t.rows() - 1);
    const int x1 = std::min(x0 + 1, t.cols() - 1);
    const int y1 = std::min(y0 + 1, t.rows() - 1);
    const double ax = x - fx, ay = y - fy;
    const double top = t(y0, x0) + ax * (t(y0, x1) - t(y0, x0));
    const double bottom = t(y1, x0) + ax * (t(y1, x1) - t(y1, x0));
    return top + ay * (bottom - top);
}

} // namespace detail

inline bool is_occluded(const SynthSpec& spec, int frame) {
    for (const auto& [a, b] : spec.occlusions)
        if (frame >= a && frame <= b)
            return true;
    return false;
}

inline int texture_at(const SynthSpec& spec, int frame) {
    int texture = 0;
    int latest = -1;
    for (const auto& s : spec.texture_switches)
        if (s.frame <= frame && s.frame >= latest) {
            texture = s.texture;
            latest = s.frame;
        }
    return texture;
}

inline BBox synth_groundtruth(const SynthSpec& spec, int frame) {
    return {spec.start_x + spec.velocity_x * frame, spec.start_y + spec.velocity_y * frame, spec.object_w, spec.object_h};
}

/// Renders one frame. Pure function of (spec, frame).
inline GrayImage render_frame(const SynthSpec& spec, const Plane& background, int frame) {
    const int ow = static_cast<int>(std::lround(spec.object_w));
    const int oh = static_cast<int>(std::lround(spec.object_h));
    const std::uint64_t texture_seed = detail::mix_seed(spec.seed, 1000 + static_cast<std::uint64_t>(texture_at(spec, frame)));
    const Plane texture = is_occluded(spec, frame) ? detail::object_texture(ow, oh, detail::mix_seed(spec.seed, 7))
                                                   : detail::object_texture(ow, oh, texture_seed);

    Plane img = background;
    const BBox box = synth_groundtruth(spec, frame);
    const int x_begin = std::max(0, static_cast<int>(std::floor(box.left())));
    const int x_end = std::min(spec.width, static_cast<int>(std::ceil(box.left() + box.w)));
    const int y_begin = std::max(0, static_cast<int>(std::floor(box.top())));
    const int y_end = std::min(spec.height, static_cast<int>(std::ceil(box.top() + box.h)));
    const double sx = texture.cols() / box.w;
    const double sy = texture.rows() / box.h;
    for (int y = y_begin; y < y_end; ++y)
        for (int x = x_begin; x < x_end; ++x) {
            const double u = (x + 0.5 - box.left()) * sx;
            const double v = (y + 0.5 - box.top()) * sy;
            if (u < 0.0 || v < 0.0 || u >= texture.cols() || v >= texture.rows())
                continue;
            img(y, x) = detail::sample_clamped(texture, u - 0.5, v - 0.5);
        }

    if (spec.noise > 0.0) {
        std::mt19937_64 rng(detail::mix_seed(spec.seed, 5000 + static_cast<std::uint64_t>(frame)));
        std::normal_distribution<double> n(0.0, spec.noise);
        for (auto& v : img.values()) v = std::clamp(v + n(rng), 0.0, 1.0);
    }
    return GrayImage(std::move(img));
}

inline Plane synth_background(const SynthSpec& spec) {
    return detail::clutter_background(spec.width, spec.height, spec.clutter, detail::mix_seed(spec.seed, 3));
}

inline SynthSequence synth_sequence(const SynthSpec& spec) {
    if (spec.width < 1 || spec.height < 1 || spec.frames < 1 || !(spec.object_w >= 1.0) || !(spec.object_h >= 1.0))
        fail(ErrorKind::InvalidInput, "synthetic spec has degenerate dimensions");
    SynthSequence seq;
    seq.name = spec.name;
    const Plane background = synth_background(spec);
    for (int f = 0; f < spec.frames; ++f) {
        seq.frames.push_back(render_frame(spec, background, f));
        seq.groundtruth.push_back(synth_groundtruth(spec, f));
        seq.occluded.push_back(is_occluded(spec, f));
    }
    return seq;
}

} // namespace amcf::bench

#endif
