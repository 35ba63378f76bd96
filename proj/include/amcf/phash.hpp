#ifndef AMCF_PHASH_HPP
#define AMCF_PHASH_HPP

#include <cstdint>

#include "imaging.hpp"

namespace amcf {

/// S x S binary perceptual-hash matrix.
class HashMatrix {
public:
    HashMatrix() = default;
    explicit HashMatrix(int side) : bits_(side, side, std::uint8_t{0}) {}

    int side() const noexcept { return bits_.rows(); }
    bool bit(int i, int j) const noexcept { return bits_(i, j) != 0; }
    void set(int i, int j, bool value) noexcept { bits_(i, j) = value ? 1 : 0; }
    std::size_t popcount() const noexcept {
        std::size_t n = 0;
        for (auto b : bits_.values()) n += b;
        return n;
    }
    const Grid<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const HashMatrix&, const HashMatrix&) = default;

private:
    Grid<std::uint8_t> bits_;
};

namespace phash {
inline constexpr int kResizeSide = 32;
inline constexpr int kHashSide = 8;
} // namespace phash

/// Resize to 32x32, take the low-frequency 8x8 DCT block B, and set a bit wherever the
/// coefficient is strictly above mean(B).
inline HashMatrix hash_view(const GrayImage& view) {
    if (view.empty())
        fail(ErrorKind::InvalidInput, "hash of empty view");
    const GrayImage small = view.width() == phash::kResizeSide && view.height() == phash::kResizeSide
                                ? view
                                : resize(view, phash::kResizeSide, phash::kResizeSide);
    const Plane coeffs = dct2(small);

    constexpr int s = phash::kHashSide;
    double mean = 0.0;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) mean += coeffs(i, j);
    mean /= s * s;

    HashMatrix hash(s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) hash.set(i, j, coeffs(i, j) > mean);
    return hash;
}

/// Normalised Hamming distance, in [0,1].
inline double difference_score(const HashMatrix& a, const HashMatrix& b) {
    if (a.side() != b.side())
        fail(ErrorKind::SizeMismatch, "hash sides differ");
    if (a.side() == 0)
        return 0.0;
    std::size_t differing = 0;
    const auto pa = a.bits().values();
    const auto pb = b.bits().values();
    for (std::size_t i = 0; i < pa.size(); ++i) differing += (pa[i] ^ pb[i]);
    return static_cast<double>(differing) / static_cast<double>(pa.size());
}

} // namespace amcf

#endif
