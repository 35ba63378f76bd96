#ifndef AMCF_CONTEXT_HPP
#define AMCF_CONTEXT_HPP

#include <cmath>

#include "features.hpp"

namespace amcf {

/// Quadratic object-suppression mask: 0 at the object-centre cell, rising as the squared
/// normalised elliptical radius, clamped to 1 outside the object extent.
class SuppressionMask {
public:
    SuppressionMask() = default;
    SuppressionMask(int rows, int cols, double obj_w, double obj_h) : values_(rows, cols) {
        if (rows < 1 || cols < 1)
            fail(ErrorKind::InvalidInput, "mask dimensions must be positive");
        if (!(obj_w > 0.0) || !(obj_h > 0.0))
            fail(ErrorKind::ParameterConstraintViolation, "object extent must be positive");
        const int r0 = rows / 2;
        const int c0 = cols / 2;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const double u = 2.0 * (c - c0) / obj_w;
                const double v = 2.0 * (r - r0) / obj_h;
                values_(r, c) = std::min(1.0, u * u + v * v);
            }
    }

    int rows() const noexcept { return values_.rows(); }
    int cols() const noexcept { return values_.cols(); }
    int center_row() const noexcept { return rows() / 2; }
    int center_col() const noexcept { return cols() / 2; }
    double operator()(int r, int c) const noexcept { return values_(r, c); }
    const Plane& values() const noexcept { return values_; }

private:
    Plane values_;
};

/// obj_w, obj_h are in cells.
inline SuppressionMask suppression_mask(int rows, int cols, double obj_w, double obj_h) {
    return SuppressionMask(rows, cols, obj_w, obj_h);
}

/// Elementwise h ⊙ x on every channel.
inline FeatureMap apply_mask(FeatureMap f, const SuppressionMask& mask) {
    if (f.rows() != mask.rows() || f.cols() != mask.cols())
        fail(ErrorKind::ShapeMismatch, "apply_mask: mask does not match feature grid");
    const auto h = mask.values().values();
    for (int d = 0; d < f.channels(); ++d) {
        auto v = f.channel(d).values();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= h[i];
    }
    return f;
}

struct ContextGeometry {
    /// Side of the square search region in frame pixels.
    double search_side = 0.0;
    /// Side of the resampled search patch in pixels (a multiple of `cell`).
    int patch_side = 0;
    double context_scale = 2.0;
    int cell = 4;
};

/// Crops a context_scale-times larger square around the object, compresses it to the search
/// patch size, extracts windowed features and suppresses the object: m_b = h ⊙ x_b.
inline FeatureMap compressed_context_features(const GrayImage& frame, const BBox& object, const ContextGeometry& g,
                                              const CosineWindow& window) {
    if (!(g.context_scale > 1.0))
        fail(ErrorKind::ParameterConstraintViolation, "context_scale must exceed 1");
    if (!object.valid() || !(g.search_side > 0.0) || g.patch_side < g.cell)
        fail(ErrorKind::InvalidInput, "invalid context geometry");

    const double side = g.context_scale * g.search_side;
    const GrayImage patch = extract_patch(frame, {object.cx, object.cy, side, side}, g.patch_side, g.patch_side);
    FeatureMap x_b = apply_window(compute_features(patch, g.cell), window);

    const double px_per_frame_px = g.patch_side / side;
    const double obj_w = object.w * px_per_frame_px / g.cell;
    const double obj_h = object.h * px_per_frame_px / g.cell;
    const SuppressionMask mask = suppression_mask(x_b.rows(), x_b.cols(), obj_w, obj_h);
    return apply_mask(std::move(x_b), mask);
}

} // namespace amcf

#endif
