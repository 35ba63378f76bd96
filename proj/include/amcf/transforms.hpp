#ifndef AMCF_TRANSFORMS_HPP
#define AMCF_TRANSFORMS_HPP

#include <cmath>
#include <cstdint>

#include <opencv2/core.hpp>

#include "grid.hpp"

// 2-D DFT contracts and elementwise spectral algebra.
//
// Convention: forward transform is unnormalized, the inverse applies 1/(rows*cols).
// Spectra are full complex grids, same shape as the real plane they came from.

namespace amcf {

using Spectrum = Grid<Complex>;

namespace transforms {

namespace detail {
inline thread_local std::uint64_t transform_count = 0;
}

/// Number of forward+inverse transforms issued on this thread (instrumentation).
inline std::uint64_t transform_count() noexcept { return detail::transform_count; }
inline void reset_transform_count() noexcept { detail::transform_count = 0; }

inline Spectrum dft2(const Plane& plane) {
    if (plane.empty())
        fail(ErrorKind::InvalidInput, "dft2 of empty plane");
    ++detail::transform_count;
    Spectrum out(plane.rows(), plane.cols());
    const cv::Mat src(plane.rows(), plane.cols(), CV_64F, const_cast<double*>(plane.data()));
    cv::Mat dst(out.rows(), out.cols(), CV_64FC2, out.data());
    cv::dft(src, dst, cv::DFT_COMPLEX_OUTPUT);
    return out;
}

struct InverseResult {
    Plane values;
    /// Largest |imag| seen in the inverse transform.
    double max_imag_residue = 0.0;
};

/// Inverse transform keeping the real part. In strict mode an imaginary residue above
/// 1e-6 * max|value| raises ImaginaryResidueExceeded.
inline InverseResult idft2(const Spectrum& spec, bool strict = false) {
    if (spec.empty())
        fail(ErrorKind::InvalidInput, "idft2 of empty spectrum");
    ++detail::transform_count;
    Spectrum full(spec.rows(), spec.cols());
    const cv::Mat src(spec.rows(), spec.cols(), CV_64FC2, const_cast<Complex*>(spec.data()));
    cv::Mat dst(full.rows(), full.cols(), CV_64FC2, full.data());
    cv::dft(src, dst, cv::DFT_INVERSE | cv::DFT_SCALE);

    InverseResult result{Plane(spec.rows(), spec.cols()), 0.0};
    double max_value = 0.0;
    auto out = result.values.values();
    auto in = full.values();
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = in[i].real();
        result.max_imag_residue = std::max(result.max_imag_residue, std::abs(in[i].imag()));
        max_value = std::max(max_value, std::abs(in[i]));
    }
    if (strict && result.max_imag_residue > 1e-6 * max_value)
        fail(ErrorKind::ImaginaryResidueExceeded,
             "imaginary residue " + std::to_string(result.max_imag_residue) + " vs max " + std::to_string(max_value));
    return result;
}

/// Real part of the inverse transform for spectra known to be conjugate-symmetric.
inline Plane idft2_real(const Spectrum& spec) { return idft2(spec).values; }

inline Spectrum conj(Spectrum a) {
    for (auto& v : a.values()) v = std::conj(v);
    return a;
}

inline Spectrum mul(const Spectrum& a, const Spectrum& b) {
    require_same_shape(a, b, "mul");
    Spectrum out(a.rows(), a.cols());
    auto pa = a.values(), pb = b.values();
    auto po = out.values();
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = pa[i] * pb[i];
    return out;
}

/// conj(a) ⊙ b, fused.
inline Spectrum mul_conj(const Spectrum& a, const Spectrum& b) {
    require_same_shape(a, b, "mul_conj");
    Spectrum out(a.rows(), a.cols());
    auto pa = a.values(), pb = b.values();
    auto po = out.values();
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = std::conj(pa[i]) * pb[i];
    return out;
}

/// Per-bin |a|², real by construction.
inline Plane abs2(const Spectrum& a) {
    Plane out(a.rows(), a.cols());
    auto pa = a.values();
    auto po = out.values();
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = std::norm(pa[i]);
    return out;
}

inline Spectrum add(const Spectrum& a, const Spectrum& b) {
    require_same_shape(a, b, "add");
    Spectrum out(a.rows(), a.cols());
    auto pa = a.values(), pb = b.values();
    auto po = out.values();
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = pa[i] + pb[i];
    return out;
}

inline Spectrum scale(Spectrum a, Complex factor) {
    for (auto& v : a.values()) v *= factor;
    return a;
}

/// a ⊘ (denominator + offset), denominator real.
inline Spectrum div_real(const Spectrum& a, const Plane& denominator, double offset) {
    require_same_shape(a, denominator, "div_real");
    Spectrum out(a.rows(), a.cols());
    auto pa = a.values();
    auto pd = denominator.values();
    auto po = out.values();
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = pa[i] / (pd[i] + offset);
    return out;
}

/// acc += factor * a
inline void accumulate(Spectrum& acc, const Spectrum& a, double factor) {
    require_same_shape(acc, a, "accumulate");
    auto pa = a.values();
    auto po = acc.values();
    for (std::size_t i = 0; i < po.size(); ++i) po[i] += factor * pa[i];
}

inline void accumulate(Plane& acc, const Plane& a, double factor) {
    require_same_shape(acc, a, "accumulate");
    auto pa = a.values();
    auto po = acc.values();
    for (std::size_t i = 0; i < po.size(); ++i) po[i] += factor * pa[i];
}

} // namespace transforms
} // namespace amcf

#endif
