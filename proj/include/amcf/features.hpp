#ifndef AMCF_FEATURES_HPP
#define AMCF_FEATURES_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "imaging.hpp"

namespace amcf {

/// rows x cols x channels tensor of cell features, stored channel-major.
class FeatureMap {
public:
    FeatureMap() = default;
    FeatureMap(int rows, int cols, int channels) : rows_(rows), cols_(cols) {
        if (rows < 1 || cols < 1 || channels < 1)
            fail(ErrorKind::InvalidInput, "feature map dimensions must be positive");
        channels_.assign(static_cast<std::size_t>(channels), Plane(rows, cols));
    }
    explicit FeatureMap(std::vector<Plane> channels) : channels_(std::move(channels)) {
        if (channels_.empty())
            fail(ErrorKind::InvalidInput, "feature map needs at least one channel");
        rows_ = channels_.front().rows();
        cols_ = channels_.front().cols();
        for (const auto& c : channels_) require_same_shape(c, channels_.front(), "FeatureMap");
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int channels() const noexcept { return static_cast<int>(channels_.size()); }

    Plane& channel(int d) { return channels_.at(static_cast<std::size_t>(d)); }
    const Plane& channel(int d) const { return channels_.at(static_cast<std::size_t>(d)); }

    bool same_shape(const FeatureMap& o) const noexcept {
        return rows_ == o.rows_ && cols_ == o.cols_ && channels() == o.channels();
    }

    friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Plane> channels_;
};

inline void require_same_shape(const FeatureMap& a, const FeatureMap& b, const char* where) {
    if (!a.same_shape(b))
        fail(ErrorKind::ShapeMismatch, std::string(where) + ": feature map shapes differ");
}

/// Separable raised-cosine (Hann) window: zero on the border, peak in the middle.
class CosineWindow {
public:
    CosineWindow() = default;
    CosineWindow(int rows, int cols) : weights_(rows, cols) {
        const auto hann = [](int n) {
            std::vector<double> w(static_cast<std::size_t>(n), 1.0);
            if (n > 1)
                for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
            return w;
        };
        const auto wr = hann(rows);
        const auto wc = hann(cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) weights_(r, c) = wr[r] * wc[c];
    }

    static CosineWindow ones(int rows, int cols) {
        CosineWindow w;
        w.weights_ = Plane(rows, cols, 1.0);
        return w;
    }

    int rows() const noexcept { return weights_.rows(); }
    int cols() const noexcept { return weights_.cols(); }
    const Plane& weights() const noexcept { return weights_; }

private:
    Plane weights_;
};

namespace features {

inline constexpr int kOrientationBins = 9;
inline constexpr int kChannels = 1 + kOrientationBins;
inline constexpr double kNormEpsilon = 1e-3;

/// Orientation bin of an unsigned gradient, angle folded into [0, pi).
inline int orientation_bin(double gx, double gy) noexcept {
    double theta = std::atan2(gy, gx);
    if (theta < 0.0) theta += std::numbers::pi;
    if (theta >= std::numbers::pi) theta -= std::numbers::pi;
    const int bin = static_cast<int>(theta / (std::numbers::pi / kOrientationBins));
    return std::clamp(bin, 0, kOrientationBins - 1);
}

} // namespace features

/// Cell features: channel 0 is the cell-mean gray level minus 0.5, channels 1..9 a
/// magnitude-weighted unsigned orientation histogram, L2-normalised per cell.
/// Gradients are central differences with replicated borders.
inline FeatureMap compute_features(const GrayImage& patch, int cell) {
    if (cell < 1)
        fail(ErrorKind::InvalidInput, "cell size must be positive");
    if (patch.width() < cell || patch.height() < cell)
        fail(ErrorKind::InvalidInput, "patch smaller than one cell");
    if (patch.width() % cell != 0 || patch.height() % cell != 0)
        fail(ErrorKind::InvalidInput, "patch dimensions must be multiples of the cell size");

    const int w = patch.width();
    const int h = patch.height();
    const int rows = h / cell;
    const int cols = w / cell;
    FeatureMap out(rows, cols, features::kChannels);
    const Plane& px = patch.pixels();

    std::vector<double> hist(static_cast<std::size_t>(rows * cols * features::kOrientationBins), 0.0);
    Plane& gray = out.channel(0);

    for (int y = 0; y < h; ++y) {
        const auto up = px.row(std::max(y - 1, 0));
        const auto mid = px.row(y);
        const auto down = px.row(std::min(y + 1, h - 1));
        const int cr = y / cell;
        for (int x = 0; x < w; ++x) {
            const double gx = mid[std::min(x + 1, w - 1)] - mid[std::max(x - 1, 0)];
            const double gy = down[x] - up[x];
            const int cc = x / cell;
            gray(cr, cc) += mid[x];
            const double mag = std::sqrt(gx * gx + gy * gy);
            if (mag > 0.0)
                hist[static_cast<std::size_t>((cr * cols + cc) * features::kOrientationBins +
                                              features::orientation_bin(gx, gy))] += mag;
        }
    }

    const double inv_area = 1.0 / (cell * cell);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            gray(r, c) = gray(r, c) * inv_area - 0.5;
            const double* bins = &hist[static_cast<std::size_t>((r * cols + c) * features::kOrientationBins)];
            double norm = 0.0;
            for (int b = 0; b < features::kOrientationBins; ++b) norm += bins[b] * bins[b];
            const double scale = 1.0 / (std::sqrt(norm) + features::kNormEpsilon);
            for (int b = 0; b < features::kOrientationBins; ++b)
                out.channel(1 + b)(r, c) = std::clamp(bins[b] * scale, 0.0, 1.0);
        }
    return out;
}

inline FeatureMap apply_window(FeatureMap f, const CosineWindow& window) {
    if (f.rows() != window.rows() || f.cols() != window.cols())
        fail(ErrorKind::ShapeMismatch, "apply_window: window does not match feature grid");
    const auto w = window.weights().values();
    for (int d = 0; d < f.channels(); ++d) {
        auto v = f.channel(d).values();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w[i];
    }
    return f;
}

} // namespace amcf

#endif
