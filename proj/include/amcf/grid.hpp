#ifndef AMCF_GRID_HPP
#define AMCF_GRID_HPP

#include <algorithm>
#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"

namespace amcf {

using Complex = std::complex<double>;

/// Dense row-major 2-D array. Rows index the vertical axis (y), cols the horizontal axis (x).
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
        if (rows < 0 || cols < 0)
            fail(ErrorKind::InvalidInput, "negative grid dimensions");
    }
    Grid(int rows, int cols, std::vector<T> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows < 0 || cols < 0 || data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
            fail(ErrorKind::InvalidInput, "grid data length does not match dimensions");
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(int r, int c) noexcept {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }
    const T& operator()(int r, int c) const noexcept {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    /// Circular (wrap-around) access, used for shift arithmetic on periodic signals.
    const T& wrapped(int r, int c) const noexcept {
        r %= rows_;
        c %= cols_;
        if (r < 0) r += rows_;
        if (c < 0) c += cols_;
        return (*this)(r, c);
    }

    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }
    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }
    std::span<T> row(int r) noexcept { return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const T> row(int r) const noexcept {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    bool same_shape(const Grid& other) const noexcept { return rows_ == other.rows_ && cols_ == other.cols_; }

    template <typename U>
    bool same_shape(const Grid<U>& other) const noexcept {
        return rows_ == other.rows() && cols_ == other.cols();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

/// Real-valued matrix (feature plane, label map, response map).
using Plane = Grid<double>;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* where) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(ErrorKind::ShapeMismatch, std::string(where) + ": " + std::to_string(a.rows()) + "x" +
                                           std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                           std::to_string(b.cols()));
}

inline double max_abs(const Plane& p) {
    double m = 0.0;
    for (double v : p.values()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace amcf

#endif
