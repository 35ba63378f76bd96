#ifndef AMCF_FILTER_HPP
#define AMCF_FILTER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "features.hpp"
#include "transforms.hpp"

// Frequency-domain multi-view ridge regression.
//
// A trained filter spectrum is stored in the form it is consumed by detection: the
// response to a test sample z is idft(sum_d c^d * filter^d ⊙ ẑ^d), which for z equal to a
// training sample reproduces that sample's desired response (up to regularisation).
// Equivalently, filter^d is the DFT of w^d where w minimises
//
//   ||x_c * w - y_c||² + λ2 Σ_k ||x_k * w - y_k||² + λ3 ||m_b * w||² + λ1 ||w||²
//
// with * denoting circular convolution (exact for a single channel; for several channels
// the denominator is pooled across channels).

namespace amcf {

/// Per-channel spectra of one sample.
using SampleSpectra = std::vector<Spectrum>;

inline SampleSpectra spectra_of(const FeatureMap& f) {
    SampleSpectra out;
    out.reserve(static_cast<std::size_t>(f.channels()));
    for (int d = 0; d < f.channels(); ++d) out.push_back(transforms::dft2(f.channel(d)));
    return out;
}

struct FilterParams {
    double lambda1 = 1e-2;
    double lambda2 = 0.15;
    double lambda3 = 0.5;
    double gamma = 0.02;
    double eta = 0.02;
};

inline void validate(const FilterParams& p) {
    if (!(p.lambda1 > 0.0))
        fail(ErrorKind::NonpositiveRegularizer, "lambda1 must be positive");
    if (!(p.lambda2 >= 0.0) || !(p.lambda3 >= 0.0))
        fail(ErrorKind::ParameterConstraintViolation, "lambda2 and lambda3 must be nonnegative");
    if (!(p.gamma >= 0.0 && p.gamma <= 1.0))
        fail(ErrorKind::GammaOutOfRange, "gamma must lie in [0,1]");
    if (!(p.eta >= 0.0 && p.eta <= 1.0))
        fail(ErrorKind::ParameterConstraintViolation, "eta must lie in [0,1]");
}

/// A memory sample for training: its spectra and the spectrum of its desired response.
struct LabeledSpectra {
    std::reference_wrapper<const SampleSpectra> sample;
    std::reference_wrapper<const Spectrum> label;
};

/// Fresh per-frame sufficient statistics.
struct TrainingTerms {
    /// x̂_c* ⊙ ŷ_c + λ2 Σ_k x̂_k* ⊙ ŷ_k, per channel.
    std::vector<Spectrum> numerator;
    /// |x̂_c|² + λ2 Σ_k |x̂_k|², per channel.
    std::vector<Plane> energy;
    /// |m̂_b|² per channel; empty when no context sample was supplied.
    std::vector<Plane> context_energy;

    int channels() const noexcept { return static_cast<int>(numerator.size()); }
};

inline TrainingTerms train_terms(const SampleSpectra& current, const Spectrum& current_label,
                                 std::span<const LabeledSpectra> views, const SampleSpectra* context, double lambda2) {
    if (current.empty())
        fail(ErrorKind::InvalidInput, "train_terms: no channels");
    const auto D = current.size();
    for (const auto& v : views)
        if (v.sample.get().size() != D)
            fail(ErrorKind::ShapeMismatch, "train_terms: view channel count differs");
    if (context && context->size() != D)
        fail(ErrorKind::ShapeMismatch, "train_terms: context channel count differs");

    TrainingTerms t;
    t.numerator.reserve(D);
    t.energy.reserve(D);
    for (std::size_t d = 0; d < D; ++d) {
        const Spectrum& x = current[d];
        require_same_shape(x, current_label, "train_terms");
        Spectrum num = transforms::mul_conj(x, current_label);
        Plane energy = transforms::abs2(x);
        if (lambda2 != 0.0)
            for (const auto& v : views) {
                const Spectrum& xk = v.sample.get()[d];
                transforms::accumulate(num, transforms::mul_conj(xk, v.label.get()), lambda2);
                transforms::accumulate(energy, transforms::abs2(xk), lambda2);
            }
        t.numerator.push_back(std::move(num));
        t.energy.push_back(std::move(energy));
    }
    if (context) {
        t.context_energy.reserve(D);
        for (std::size_t d = 0; d < D; ++d) {
            require_same_shape((*context)[d], current[d], "train_terms");
            t.context_energy.push_back(transforms::abs2((*context)[d]));
        }
    }
    return t;
}

/// Spatial-domain convenience overload; transforms every input.
inline TrainingTerms train_terms(const FeatureMap& current, const Plane& current_label,
                                 std::span<const std::pair<FeatureMap, Plane>> views, const FeatureMap* context,
                                 double lambda2) {
    const SampleSpectra xc = spectra_of(current);
    const Spectrum yc = transforms::dft2(current_label);
    std::vector<SampleSpectra> view_spectra;
    std::vector<Spectrum> view_labels;
    view_spectra.reserve(views.size());
    view_labels.reserve(views.size());
    for (const auto& [f, y] : views) {
        require_same_shape(f, current, "train_terms");
        view_spectra.push_back(spectra_of(f));
        view_labels.push_back(transforms::dft2(y));
    }
    std::vector<LabeledSpectra> labeled;
    for (std::size_t i = 0; i < views.size(); ++i) labeled.push_back({std::cref(view_spectra[i]), std::cref(view_labels[i])});
    std::optional<SampleSpectra> mb;
    if (context) {
        require_same_shape(*context, current, "train_terms");
        mb = spectra_of(*context);
    }
    return train_terms(xc, yc, labeled, mb ? &*mb : nullptr, lambda2);
}

/// Per-channel denominator contribution |x̂|² terms + λ3 |m̂_b|².
inline std::vector<Plane> denominator_terms(const TrainingTerms& t, double lambda3) {
    std::vector<Plane> out = t.energy;
    if (lambda3 != 0.0 && !t.context_energy.empty())
        for (std::size_t d = 0; d < out.size(); ++d) transforms::accumulate(out[d], t.context_energy[d], lambda3);
    return out;
}

/// ŵ^d = N^d / (Σ_d' D^d' + λ1).
inline std::vector<Spectrum> solve_from(const std::vector<Spectrum>& numerator, const std::vector<Plane>& denominator,
                                        double lambda1) {
    if (!(lambda1 > 0.0))
        fail(ErrorKind::NonpositiveRegularizer, "lambda1 must be positive");
    if (numerator.empty() || numerator.size() != denominator.size())
        fail(ErrorKind::ShapeMismatch, "solve: numerator/denominator channel counts differ");
    Plane pooled(denominator.front().rows(), denominator.front().cols());
    for (const auto& d : denominator) transforms::accumulate(pooled, d, 1.0);
    std::vector<Spectrum> w;
    w.reserve(numerator.size());
    for (const auto& n : numerator) w.push_back(transforms::div_real(n, pooled, lambda1));
    return w;
}

inline std::vector<Spectrum> solve_filter(const TrainingTerms& t, double lambda1, double lambda3) {
    return solve_from(t.numerator, denominator_terms(t, lambda3), lambda1);
}

/// Running model: numerator/denominator accumulators, the solved filter and channel weights.
struct FilterState {
    FilterParams params;
    std::vector<Spectrum> numerator;
    std::vector<Plane> denominator;
    std::vector<Spectrum> filter;
    std::vector<double> weights;

    int channels() const noexcept { return static_cast<int>(filter.size()); }
};

/// Initial model from one set of terms; channel weights start uniform.
inline FilterState init_state(const TrainingTerms& t, const FilterParams& params) {
    validate(params);
    FilterState s;
    s.params = params;
    s.numerator = t.numerator;
    s.denominator = denominator_terms(t, params.lambda3);
    s.filter = solve_from(s.numerator, s.denominator, params.lambda1);
    s.weights.assign(s.numerator.size(), 1.0 / static_cast<double>(s.numerator.size()));
    return s;
}

/// Exponential blend of the accumulators with fresh terms at rate gamma, then re-solve.
inline void update_state(FilterState& s, const TrainingTerms& t, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        fail(ErrorKind::GammaOutOfRange, "gamma must lie in [0,1]");
    if (t.channels() != static_cast<int>(s.numerator.size()))
        fail(ErrorKind::ShapeMismatch, "update_state: channel count differs");
    const auto fresh_den = denominator_terms(t, s.params.lambda3);
    for (std::size_t d = 0; d < s.numerator.size(); ++d) {
        require_same_shape(s.numerator[d], t.numerator[d], "update_state");
        auto n = s.numerator[d].values();
        auto nf = t.numerator[d].values();
        for (std::size_t i = 0; i < n.size(); ++i) n[i] = (1.0 - gamma) * n[i] + gamma * nf[i];
        auto den = s.denominator[d].values();
        auto df = fresh_den[d].values();
        for (std::size_t i = 0; i < den.size(); ++i) den[i] = (1.0 - gamma) * den[i] + gamma * df[i];
    }
    s.filter = solve_from(s.numerator, s.denominator, s.params.lambda1);
}

/// Largest spatial response of each channel's filter to the matching channel of a sample.
inline std::vector<double> channel_response_maxima(const FilterState& s, const SampleSpectra& sample) {
    if (sample.size() != s.filter.size())
        fail(ErrorKind::ShapeMismatch, "channel count differs");
    std::vector<double> maxima(sample.size());
    for (std::size_t d = 0; d < sample.size(); ++d) {
        const Plane r = transforms::idft2_real(transforms::mul(s.filter[d], sample[d]));
        maxima[d] = *std::max_element(r.values().begin(), r.values().end());
    }
    return maxima;
}

/// Blends the weights towards each channel's share of the summed response maxima.
/// Negative maxima count as zero; when all shares vanish the weights are left unchanged.
/// The result is renormalised onto the simplex.
inline void blend_channel_weights(FilterState& s, std::span<const double> maxima, double eta) {
    if (maxima.size() != s.weights.size())
        fail(ErrorKind::ShapeMismatch, "channel count differs");
    if (eta == 0.0)
        return;
    double total = 0.0;
    for (double m : maxima) total += std::max(m, 0.0);
    if (!(total > 1e-12))
        return;
    double sum = 0.0;
    for (std::size_t d = 0; d < s.weights.size(); ++d) {
        s.weights[d] = (1.0 - eta) * s.weights[d] + eta * std::max(maxima[d], 0.0) / total;
        sum += s.weights[d];
    }
    for (double& c : s.weights) c /= sum;
}

inline void update_channel_weights(FilterState& s, const SampleSpectra& current, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        fail(ErrorKind::ParameterConstraintViolation, "eta must lie in [0,1]");
    if (eta == 0.0)
        return;
    const auto maxima = channel_response_maxima(s, current);
    blend_channel_weights(s, maxima, eta);
}

struct ResponseMap {
    Plane values;
    int peak_row = 0;
    int peak_col = 0;
    double peak_value = 0.0;
    /// Sub-cell refined displacement of the peak from zero shift, in cells (signed).
    double shift_rows = 0.0;
    double shift_cols = 0.0;
    double max_imag_residue = 0.0;
};

/// Quadratic surface fit over the 3x3 neighbourhood (circular) of an integer peak.
/// Returns the sub-cell offset (rows, cols), each clamped to [-0.5, 0.5].
inline std::pair<double, double> refine_peak(const Plane& r, int pr, int pc) {
    double s_y = 0, s_x = 0, s_xx = 0, s_yy = 0, s_xy = 0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            const double f = r.wrapped(pr + dy, pc + dx);
            s_x += dx * f;
            s_y += dy * f;
            s_xx += (dx * dx - 2.0 / 3.0) * f;
            s_yy += (dy * dy - 2.0 / 3.0) * f;
            s_xy += dx * dy * f;
        }
    // f ≈ a + b x + c y + d x² + e y² + g xy
    const double b = s_x / 6.0, c = s_y / 6.0, d = s_xx / 2.0, e = s_yy / 2.0, g = s_xy / 4.0;
    const double det = 4.0 * d * e - g * g;
    double ox = 0.0, oy = 0.0;
    if (d < 0.0 && e < 0.0 && det > 1e-15) {
        ox = (-2.0 * e * b + g * c) / det;
        oy = (-2.0 * d * c + g * b) / det;
    } else {
        if (d < 0.0) ox = -b / (2.0 * d);
        if (e < 0.0) oy = -c / (2.0 * e);
    }
    return {std::clamp(oy, -0.5, 0.5), std::clamp(ox, -0.5, 0.5)};
}

inline int signed_index(int i, int n) noexcept { return i <= n / 2 ? i : i - n; }

/// R = idft(Σ_d c^d filter^d ⊙ ẑ^d), with the argmax refined to sub-cell precision.
inline ResponseMap detect(const FilterState& s, const SampleSpectra& z) {
    if (z.size() != s.filter.size() || z.empty())
        fail(ErrorKind::ShapeMismatch, "detect: channel count differs");
    Spectrum acc(z.front().rows(), z.front().cols());
    for (std::size_t d = 0; d < z.size(); ++d) {
        require_same_shape(z[d], s.filter[d], "detect");
        auto a = acc.values();
        auto w = s.filter[d].values();
        auto zz = z[d].values();
        const double c = s.weights[d];
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * (w[i] * zz[i]);
    }
    auto inv = transforms::idft2(acc);

    ResponseMap out;
    out.values = std::move(inv.values);
    out.max_imag_residue = inv.max_imag_residue;
    const auto vals = out.values.values();
    const auto it = std::max_element(vals.begin(), vals.end());
    const auto idx = static_cast<int>(it - vals.begin());
    out.peak_row = idx / out.values.cols();
    out.peak_col = idx % out.values.cols();
    out.peak_value = *it;
    const auto [dr, dc] = refine_peak(out.values, out.peak_row, out.peak_col);
    out.shift_rows = signed_index(out.peak_row, out.values.rows()) + dr;
    out.shift_cols = signed_index(out.peak_col, out.values.cols()) + dc;
    return out;
}

} // namespace amcf

#endif
