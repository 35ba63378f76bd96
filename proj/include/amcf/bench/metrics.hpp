#ifndef AMCF_BENCH_METRICS_HPP
#define AMCF_BENCH_METRICS_HPP

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "../imaging.hpp"

namespace amcf::bench {

inline double center_error(const BBox& a, const BBox& b) { return std::hypot(a.cx - b.cx, a.cy - b.cy); }

inline double iou(const BBox& a, const BBox& b) {
    const double ix = std::max(0.0, std::min(a.left() + a.w, b.left() + b.w) - std::max(a.left(), b.left()));
    const double iy = std::max(0.0, std::min(a.top() + a.h, b.top() + b.h) - std::max(a.top(), b.top()));
    const double inter = ix * iy;
    const double uni = a.w * a.h + b.w * b.h - inter;
    if (!(uni > 0.0))
        return 0.0;
    return inter / uni;
}

/// Sampled curve; thresholds[i] pairs with values[i].
struct Curve {
    std::vector<double> thresholds;
    std::vector<double> values;
};

inline constexpr int kPrecisionMaxPx = 50;
inline constexpr int kSuccessSamples = 51;
inline constexpr double kPrecisionThresholdPx = 20.0;

/// Fraction of frames with centre error <= t, for t = 0..50 px.
inline Curve precision_curve(const std::vector<double>& errors) {
    Curve c;
    for (int t = 0; t <= kPrecisionMaxPx; ++t) {
        c.thresholds.push_back(t);
        std::size_t hits = 0;
        for (double e : errors) hits += e <= t ? 1 : 0;
        c.values.push_back(errors.empty() ? 0.0 : static_cast<double>(hits) / errors.size());
    }
    return c;
}

inline double precision_at(const std::vector<double>& errors, double threshold) {
    if (errors.empty())
        return 0.0;
    std::size_t hits = 0;
    for (double e : errors) hits += e <= threshold ? 1 : 0;
    return static_cast<double>(hits) / errors.size();
}

/// Fraction of frames with IoU > s, for s = 0, 0.02, ..., 1.
inline Curve success_curve(const std::vector<double>& ious) {
    Curve c;
    for (int i = 0; i < kSuccessSamples; ++i) {
        const double s = i / static_cast<double>(kSuccessSamples - 1);
        c.thresholds.push_back(s);
        std::size_t hits = 0;
        for (double v : ious) hits += v > s ? 1 : 0;
        c.values.push_back(ious.empty() ? 0.0 : static_cast<double>(hits) / ious.size());
    }
    return c;
}

/// Mean of the sampled success curve.
inline double auc(const Curve& success) {
    if (success.values.empty())
        return 0.0;
    return std::accumulate(success.values.begin(), success.values.end(), 0.0) / success.values.size();
}

struct EvalReport {
    std::string sequence;
    /// Per-frame values; nullopt where the target is absent from the ground truth.
    std::vector<std::optional<double>> center_errors;
    std::vector<std::optional<double>> ious;
    Curve precision;
    Curve success;
    double precision_20 = 0.0;
    double auc = 0.0;
    double mean_iou = 0.0;
    double fps = 0.0;
};

/// Metrics of predictions against ground truth. Absent-target frames (nullopt) are excluded
/// from every denominator.
inline EvalReport evaluate(const std::vector<BBox>& predictions, const std::vector<std::optional<BBox>>& truth) {
    EvalReport r;
    std::vector<double> errs, ious;
    const std::size_t n = std::min(predictions.size(), truth.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!truth[i]) {
            r.center_errors.push_back(std::nullopt);
            r.ious.push_back(std::nullopt);
            continue;
        }
        const double e = center_error(predictions[i], *truth[i]);
        const double o = iou(predictions[i], *truth[i]);
        r.center_errors.push_back(e);
        r.ious.push_back(o);
        errs.push_back(e);
        ious.push_back(o);
    }
    r.precision = precision_curve(errs);
    r.success = success_curve(ious);
    r.precision_20 = precision_at(errs, kPrecisionThresholdPx);
    r.auc = auc(r.success);
    r.mean_iou = ious.empty() ? 0.0 : std::accumulate(ious.begin(), ious.end(), 0.0) / ious.size();
    return r;
}

} // namespace amcf::bench

#endif
