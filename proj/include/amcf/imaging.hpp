#ifndef AMCF_IMAGING_HPP
#define AMCF_IMAGING_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include <opencv2/core.hpp>

#include "grid.hpp"

namespace amcf {

/// Luminance image, values in [0,1].
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, double fill = 0.0) : pixels_(height, width, fill) { validate(); }
    /// Takes ownership of a plane whose rows are image rows.
    explicit GrayImage(Plane pixels) : pixels_(std::move(pixels)) { validate(); }

    int width() const noexcept { return pixels_.cols(); }
    int height() const noexcept { return pixels_.rows(); }
    bool empty() const noexcept { return pixels_.empty(); }

    double operator()(int x, int y) const noexcept { return pixels_(y, x); }
    double& operator()(int x, int y) noexcept { return pixels_(y, x); }

    const Plane& pixels() const noexcept { return pixels_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    void validate() const {
        for (double v : pixels_.values())
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                fail(ErrorKind::InvalidInput, "gray value outside [0,1]");
    }

    Plane pixels_;
};

/// Axis-aligned box. Coordinates are continuous: pixel i spans [i, i+1), so the
/// centre of pixel (0,0) is (0.5, 0.5).
struct BBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    bool valid() const noexcept {
        return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h) && w > 0.0 && h > 0.0;
    }
    double left() const noexcept { return cx - w / 2.0; }
    double top() const noexcept { return cy - h / 2.0; }

    /// From the benchmark corner format (x, y, w, h) with 1-indexed pixels.
    static BBox from_corner_1based(double x, double y, double w, double h) noexcept {
        return {x - 1.0 + w / 2.0, y - 1.0 + h / 2.0, w, h};
    }
    static BBox from_corner(double x, double y, double w, double h) noexcept {
        return {x + w / 2.0, y + h / 2.0, w, h};
    }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// ITU-R BT.601 luma of an 8-bit frame. Three-channel input is taken in OpenCV's BGR order;
/// single-channel input passes through scaled to [0,1].
inline GrayImage to_gray(const cv::Mat& frame) {
    if (frame.empty() || frame.rows == 0 || frame.cols == 0)
        fail(ErrorKind::InvalidInput, "zero-sized image");
    if (frame.depth() != CV_8U || (frame.channels() != 1 && frame.channels() != 3))
        fail(ErrorKind::InvalidInput, "expected 8-bit grayscale or 3-channel frame");

    Plane out(frame.rows, frame.cols);
    for (int y = 0; y < frame.rows; ++y) {
        auto dst = out.row(y);
        if (frame.channels() == 1) {
            const auto* src = frame.ptr<std::uint8_t>(y);
            for (int x = 0; x < frame.cols; ++x) dst[x] = src[x] / 255.0;
        } else {
            const auto* src = frame.ptr<cv::Vec3b>(y);
            for (int x = 0; x < frame.cols; ++x) {
                const double luma = 0.299 * src[x][2] + 0.587 * src[x][1] + 0.114 * src[x][0];
                dst[x] = std::clamp(luma / 255.0, 0.0, 1.0);
            }
        }
    }
    return GrayImage(std::move(out));
}

namespace detail {

struct Tap {
    int i0;
    int i1;
    double frac;
};

// Bilinear taps with replicate-edge clamping for `count` output samples spanning
// [start, start + count*step) in continuous coordinates.
inline std::vector<Tap> bilinear_taps(double start, double step, int count, int extent) {
    std::vector<Tap> taps(static_cast<std::size_t>(count));
    for (int u = 0; u < count; ++u) {
        const double pos = start + (u + 0.5) * step - 0.5;
        const double base = std::floor(pos);
        const int i0 = static_cast<int>(base);
        taps[u] = {std::clamp(i0, 0, extent - 1), std::clamp(i0 + 1, 0, extent - 1), pos - base};
    }
    return taps;
}

} // namespace detail

/// Crops `region` (replicating edge pixels outside the frame) and bilinearly resamples it
/// to out_w x out_h.
inline GrayImage extract_patch(const GrayImage& img, const BBox& region, int out_w, int out_h) {
    if (img.empty())
        fail(ErrorKind::InvalidInput, "extract_patch from empty image");
    if (out_w < 1 || out_h < 1)
        fail(ErrorKind::InvalidInput, "output size must be at least 1x1");
    if (!region.valid())
        fail(ErrorKind::InvalidInput, "non-finite or degenerate region");

    const auto xs = detail::bilinear_taps(region.left(), region.w / out_w, out_w, img.width());
    const auto ys = detail::bilinear_taps(region.top(), region.h / out_h, out_h, img.height());
    const Plane& src = img.pixels();

    Plane out(out_h, out_w);
    for (int v = 0; v < out_h; ++v) {
        const auto& ty = ys[v];
        const auto r0 = src.row(ty.i0);
        const auto r1 = src.row(ty.i1);
        auto dst = out.row(v);
        for (int u = 0; u < out_w; ++u) {
            const auto& tx = xs[u];
            const double top = r0[tx.i0] + tx.frac * (r0[tx.i1] - r0[tx.i0]);
            const double bottom = r1[tx.i0] + tx.frac * (r1[tx.i1] - r1[tx.i0]);
            dst[u] = top + ty.frac * (bottom - top);
        }
    }
    return GrayImage(std::move(out));
}

inline GrayImage resize(const GrayImage& img, int out_w, int out_h) {
    return extract_patch(img, BBox::from_corner(0.0, 0.0, img.width(), img.height()), out_w, out_h);
}

namespace detail {

// Orthonormal DCT-II basis, basis(k, n) = a_k cos(pi (2n+1) k / 2N).
inline Plane dct_basis(int n) {
    Plane basis(n, n);
    for (int k = 0; k < n; ++k) {
        const double a = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int i = 0; i < n; ++i) basis(k, i) = a * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
    }
    return basis;
}

// out = left * in * right^T, left may be transposed.
inline Plane sandwich(const Plane& left, bool left_transposed, const Plane& in, const Plane& right, bool right_transposed) {
    const int rows = in.rows();
    const int cols = in.cols();
    Plane tmp(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double s = 0.0;
            for (int k = 0; k < cols; ++k) s += in(r, k) * (right_transposed ? right(k, c) : right(c, k));
            tmp(r, c) = s;
        }
    Plane out(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double s = 0.0;
            for (int k = 0; k < rows; ++k) s += (left_transposed ? left(k, r) : left(r, k)) * tmp(k, c);
            out(r, c) = s;
        }
    return out;
}

} // namespace detail

/// Orthonormal 2-D DCT-II; coefficient (0,0) is the DC term.
inline Plane dct2(const Plane& values) {
    if (values.empty())
        fail(ErrorKind::InvalidInput, "dct2 of empty input");
    const Plane row_basis = detail::dct_basis(values.rows());
    const Plane col_basis = detail::dct_basis(values.cols());
    return detail::sandwich(row_basis, false, values, col_basis, false);
}

inline Plane dct2(const GrayImage& img) { return dct2(img.pixels()); }

/// Inverse of dct2 (orthonormal DCT-III).
inline Plane idct2(const Plane& coefficients) {
    if (coefficients.empty())
        fail(ErrorKind::InvalidInput, "idct2 of empty input");
    const Plane row_basis = detail::dct_basis(coefficients.rows());
    const Plane col_basis = detail::dct_basis(coefficients.cols());
    return detail::sandwich(row_basis, true, coefficients, col_basis, true);
}

} // namespace amcf

#endif
