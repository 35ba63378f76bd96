#ifndef AMCF_MEMORY_HPP
#define AMCF_MEMORY_HPP

#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "features.hpp"
#include "phash.hpp"
#include "transforms.hpp"

namespace amcf {

/// Gaussian label with its peak at index (0,0) and circular distances elsewhere, i.e. the
/// desired response for a zero shift.
inline Plane gaussian_label(int rows, int cols, double sigma, double peak) {
    if (rows < 1 || cols < 1)
        fail(ErrorKind::InvalidInput, "label dimensions must be positive");
    if (!(sigma > 0.0) || !(peak > 0.0))
        fail(ErrorKind::ParameterConstraintViolation, "label sigma and peak must be positive");
    Plane y(rows, cols);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (int r = 0; r < rows; ++r) {
        const int dr = r <= rows / 2 ? r : r - rows;
        for (int c = 0; c < cols; ++c) {
            const int dc = c <= cols / 2 ? c : c - cols;
            y(r, c) = peak * std::exp(-(dr * dr + dc * dc) * inv);
        }
    }
    return y;
}

struct LadderParams {
    double sigma_c = 1.0;
    double peak_c = 1.0;
    int capacity = 5;
    double nu = 0.95;
    double mu = 1.05;
    double phi = 0.7;
    double varphi = 1.5;
};

/// Graded desired responses. Slot K belongs to the newest memory view; each older slot has
/// its peak scaled by nu and its spread by mu. The anchor (first frame) gets its own label.
class ResponseLadder {
public:
    int capacity() const noexcept { return static_cast<int>(slots_.size()); }

    const Plane& current() const noexcept { return current_; }
    const Plane& anchor() const noexcept { return anchor_; }
    /// k in [1, K].
    const Plane& slot(int k) const { return slots_.at(static_cast<std::size_t>(k - 1)); }

    double current_peak() const noexcept { return params_.peak_c; }
    double current_sigma() const noexcept { return params_.sigma_c; }
    double slot_peak(int k) const { return slot_peaks_.at(static_cast<std::size_t>(k - 1)); }
    double slot_sigma(int k) const { return slot_sigmas_.at(static_cast<std::size_t>(k - 1)); }
    double anchor_peak() const noexcept { return params_.phi * params_.peak_c; }
    double anchor_sigma() const noexcept { return params_.varphi * params_.sigma_c; }

    const LadderParams& params() const noexcept { return params_; }

private:
    friend ResponseLadder build_ladder(const LadderParams&, int, int);

    LadderParams params_;
    Plane current_;
    Plane anchor_;
    std::vector<Plane> slots_;
    std::vector<double> slot_peaks_;
    std::vector<double> slot_sigmas_;
};

inline void validate_ladder_params(const LadderParams& p) {
    if (!(p.nu < 1.0) || !(p.nu > 0.0))
        fail(ErrorKind::ParameterConstraintViolation, "nu must lie in (0,1)");
    if (!(p.mu > 1.0))
        fail(ErrorKind::ParameterConstraintViolation, "mu must exceed 1");
    if (!(p.phi < 1.0) || !(p.phi > 0.0))
        fail(ErrorKind::ParameterConstraintViolation, "phi must lie in (0,1)");
    if (!(p.varphi > 1.0))
        fail(ErrorKind::ParameterConstraintViolation, "varphi must exceed 1");
    if (p.capacity < 1)
        fail(ErrorKind::ParameterConstraintViolation, "memory capacity K must be at least 1");
    if (!(p.sigma_c > 0.0) || !(p.peak_c > 0.0))
        fail(ErrorKind::ParameterConstraintViolation, "current label sigma and peak must be positive");
}

inline ResponseLadder build_ladder(const LadderParams& params, int rows, int cols) {
    validate_ladder_params(params);
    ResponseLadder ladder;
    ladder.params_ = params;
    ladder.current_ = gaussian_label(rows, cols, params.sigma_c, params.peak_c);
    ladder.anchor_ = gaussian_label(rows, cols, params.varphi * params.sigma_c, params.phi * params.peak_c);

    const int K = params.capacity;
    ladder.slots_.resize(static_cast<std::size_t>(K));
    ladder.slot_peaks_.resize(static_cast<std::size_t>(K));
    ladder.slot_sigmas_.resize(static_cast<std::size_t>(K));
    double peak = params.peak_c;
    double sigma = params.sigma_c;
    for (int k = K; k >= 1; --k) {
        peak *= params.nu;
        sigma *= params.mu;
        const auto i = static_cast<std::size_t>(k - 1);
        ladder.slot_peaks_[i] = peak;
        ladder.slot_sigmas_[i] = sigma;
        ladder.slots_[i] = gaussian_label(rows, cols, sigma, peak);
    }
    return ladder;
}

/// One remembered appearance. `spectra` caches the per-channel DFT of `features`.
struct StoredView {
    FeatureMap features;
    HashMatrix hash;
    int frame_index = 0;
    std::vector<Spectrum> spectra;
};

struct AdmissionResult {
    bool admitted = false;
    double score = 0.0;
    std::optional<StoredView> evicted;
};

/// Permanent first-frame anchor plus a FIFO of at most K admitted views (oldest first).
class MemoryQueue {
public:
    MemoryQueue() = default;
    MemoryQueue(StoredView anchor, int capacity) : anchor_(std::move(anchor)), capacity_(capacity) {
        if (capacity < 1)
            fail(ErrorKind::ParameterConstraintViolation, "memory capacity K must be at least 1");
    }

    const StoredView& anchor() const noexcept { return anchor_; }
    const std::deque<StoredView>& views() const noexcept { return views_; }
    int size() const noexcept { return static_cast<int>(views_.size()); }
    int capacity() const noexcept { return capacity_; }
    bool full() const noexcept { return size() >= capacity_; }

    /// Hash of the most recently admitted view, or the anchor's before any admission.
    const HashMatrix& last_hash() const noexcept { return views_.empty() ? anchor_.hash : views_.back().hash; }

private:
    friend AdmissionResult maybe_admit(MemoryQueue&, StoredView, double);

    StoredView anchor_;
    std::deque<StoredView> views_;
    int capacity_ = 0;
};

/// Admits the candidate iff its hash differs from the last admitted view by more than tau.
inline AdmissionResult maybe_admit(MemoryQueue& queue, StoredView candidate, double tau) {
    AdmissionResult result;
    result.score = difference_score(candidate.hash, queue.last_hash());
    if (!(result.score > tau))
        return result;
    auto& views = queue.views_;
    if (queue.full()) {
        result.evicted = std::move(views.front());
        views.pop_front();
    }
    views.push_back(std::move(candidate));
    result.admitted = true;
    return result;
}

struct TrainingView {
    std::reference_wrapper<const StoredView> view;
    std::reference_wrapper<const Plane> label;
    /// 0 for the anchor, otherwise the ladder slot in [1, K].
    int slot;
};

/// Anchor paired with its own label, then stored views oldest to newest paired with slots
/// K-L+1..K, so the newest view always receives slot K.
inline std::vector<TrainingView> training_views(const MemoryQueue& queue, const ResponseLadder& ladder) {
    if (ladder.capacity() < queue.size())
        fail(ErrorKind::ShapeMismatch, "ladder has fewer slots than stored views");
    std::vector<TrainingView> out;
    out.reserve(static_cast<std::size_t>(queue.size() + 1));
    out.push_back({std::cref(queue.anchor()), std::cref(ladder.anchor()), 0});
    const int K = ladder.capacity();
    const int L = queue.size();
    for (int i = 0; i < L; ++i) {
        const int slot = K - L + 1 + i;
        out.push_back({std::cref(queue.views()[static_cast<std::size_t>(i)]), std::cref(ladder.slot(slot)), slot});
    }
    return out;
}

} // namespace amcf

#endif
