#include <random>

#include <gtest/gtest.h>

#include <amcf/filter.hpp>
#include <amcf/memory.hpp>

#include "oracles.hpp"

using namespace amcf;

namespace {

FeatureMap single(const Plane& p) { return FeatureMap(std::vector<Plane>{p}); }

double rel_l2(const Spectrum& a, const Grid<Complex>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a.values()[i] - b.values()[i]);
        den += std::norm(b.values()[i]);
    }
    return std::sqrt(num / den);
}

double max_diff(const Spectrum& a, const Spectrum& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

/// Library solution of a 1-D instance through the spatial-domain overload.
std::vector<Spectrum> library_solve(const oracle::RidgeInstance& p) {
    std::vector<std::pair<FeatureMap, Plane>> views;
    for (std::size_t k = 0; k < p.x_k.size(); ++k)
        views.emplace_back(single(oracle::row_plane(p.x_k[k])), oracle::row_plane(p.y_k[k]));
    const FeatureMap ctx = p.m_b.empty() ? FeatureMap{} : single(oracle::row_plane(p.m_b));
    const TrainingTerms t = train_terms(single(oracle::row_plane(p.x_c)), oracle::row_plane(p.y_c), views,
                                        p.m_b.empty() ? nullptr : &ctx, p.lambda2);
    return solve_filter(t, p.lambda1, p.lambda3);
}

oracle::RidgeInstance random_instance(std::mt19937_64& rng, int n, int views, bool context) {
    std::uniform_real_distribution<double> lam(0.05, 1.0);
    oracle::RidgeInstance p;
    p.x_c = oracle::random_vector(rng, n);
    p.y_c = oracle::random_vector(rng, n);
    for (int k = 0; k < views; ++k) {
        p.x_k.push_back(oracle::random_vector(rng, n));
        p.y_k.push_back(oracle::random_vector(rng, n));
    }
    if (context) p.m_b = oracle::random_vector(rng, n);
    p.lambda1 = lam(rng);
    p.lambda2 = lam(rng);
    p.lambda3 = lam(rng);
    return p;
}

Eigen::VectorXd spatial(const Spectrum& w) {
    const Plane v = transforms::idft2_real(w);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

TrainingTerms random_terms(std::mt19937_64& rng, int rows, int cols, int D, bool context) {
    std::vector<Plane> x, m;
    for (int d = 0; d < D; ++d) {
        x.push_back(oracle::random_plane(rng, rows, cols));
        m.push_back(oracle::random_plane(rng, rows, cols));
    }
    const FeatureMap fx(x), fm(m);
    const Plane y = gaussian_label(rows, cols, 1.5, 1.0);
    return train_terms(fx, y, {}, context ? &fm : nullptr, 0.15);
}

} // namespace

TEST(Filter, ImpulseSampleTerms) {
    Plane x(6, 6);
    x(0, 0) = 1.0;
    const Plane y = gaussian_label(6, 6, 1.0, 1.0);
    const TrainingTerms t = train_terms(single(x), y, {}, nullptr, 0.15);
    const Spectrum y_hat = transforms::dft2(y);
    EXPECT_LT(max_diff(t.numerator[0], y_hat), 1e-12);
    for (double e : t.energy[0].values()) EXPECT_NEAR(e, 1.0, 1e-12);
    EXPECT_TRUE(t.context_energy.empty());

    const auto w = solve_filter(t, 0.01, 0.5);
    EXPECT_LT(max_diff(w[0], transforms::scale(y_hat, 1.0 / 1.01)), 1e-12);
}

TEST(Filter, ViewEqualToCurrentScalesNumerator) {
    std::mt19937_64 rng(71);
    const Plane x = oracle::random_plane(rng, 8, 8);
    const Plane y = gaussian_label(8, 8, 1.0, 1.0);
    const std::vector<std::pair<FeatureMap, Plane>> views{{single(x), y}};
    const TrainingTerms plain = train_terms(single(x), y, {}, nullptr, 0.15);
    const TrainingTerms with = train_terms(single(x), y, views, nullptr, 0.15);
    EXPECT_LT(max_diff(with.numerator[0], transforms::scale(plain.numerator[0], 1.15)), 1e-10);
    // lambda2 = 0 ignores the views entirely
    const TrainingTerms off = train_terms(single(x), y, views, nullptr, 0.0);
    EXPECT_EQ(off.numerator[0], plain.numerator[0]);
    EXPECT_EQ(off.energy[0], plain.energy[0]);
}

TEST(Filter, MatchesDenseRidgeSolution) {
    std::mt19937_64 rng(72);
    int instance = 0;
    for (int L : {0, 1, 3})
        for (int i = 0; i < 34; ++i, ++instance) {
            const int n = 8 + (i % 9);
            const auto p = random_instance(rng, n, L, i % 4 != 0);
            const Eigen::VectorXd w = oracle::dense_ridge(p);
            const auto w_hat = library_solve(p);
            std::vector<double> wv(w.data(), w.data() + w.size());
            EXPECT_LT(rel_l2(w_hat[0], oracle::naive_dft(oracle::row_plane(wv))), 1e-8) << "instance " << instance;
        }
    EXPECT_GE(instance, 100);
}

TEST(Filter, SolutionIsStationaryPointOfObjective) {
    std::mt19937_64 rng(73);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_instance(rng, 12, i % 3, true);
        const Eigen::VectorXd w = spatial(library_solve(p)[0]);
        const double f0 = oracle::ridge_objective(p, w);
        for (int j = 0; j < 20; ++j) {
            Eigen::VectorXd delta(w.size());
            for (auto& v : delta) v = g(rng);
            delta *= 1e-3 / delta.norm();
            EXPECT_GE(oracle::ridge_objective(p, w + delta), f0 - 1e-10);
        }
    }
}

TEST(Filter, RegulariserShrinksFilter) {
    std::mt19937_64 rng(74);
    const auto p = random_instance(rng, 16, 1, true);
    double previous = std::numeric_limits<double>::infinity();
    for (double l1 : {1.0, 10.0, 100.0}) {
        auto q = p;
        q.lambda1 = l1;
        const double norm = spatial(library_solve(q)[0]).norm();
        EXPECT_LT(norm, previous);
        previous = norm;
    }
    try {
        auto q = p;
        q.lambda1 = 0.0;
        (void)library_solve(q);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonpositiveRegularizer);
    }
}

TEST(Filter, DenominatorBoundedBelowByRegulariser) {
    std::mt19937_64 rng(75);
    const TrainingTerms t = random_terms(rng, 8, 8, 4, true);
    const auto den = denominator_terms(t, 0.5);
    Plane pooled(8, 8);
    for (const auto& d : den) {
        for (double v : d.values()) EXPECT_GE(v, 0.0);
        transforms::accumulate(pooled, d, 1.0);
    }
    for (double v : pooled.values()) EXPECT_GE(v, 0.0);
    const auto w = solve_from(t.numerator, den, 0.01);
    for (std::size_t i = 0; i < pooled.size(); ++i)
        EXPECT_NEAR(std::abs(w[0].values()[i]), std::abs(t.numerator[0].values()[i]) / (pooled.values()[i] + 0.01), 1e-12);
}

TEST(Filter, ZeroContextWeightDropsContextExactly) {
    std::mt19937_64 rng(76);
    auto rng2 = rng;
    const TrainingTerms with = random_terms(rng, 8, 8, 3, true);
    const TrainingTerms without = random_terms(rng2, 8, 8, 3, false);
    const auto a = denominator_terms(with, 0.0), b = denominator_terms(without, 0.0);
    for (std::size_t d = 0; d < a.size(); ++d)
        for (std::size_t i = 0; i < a[d].size(); ++i) EXPECT_NEAR(a[d].values()[i], b[d].values()[i], 1e-12);
}

TEST(Filter, UpdateRateEndpoints) {
    std::mt19937_64 rng(77);
    const TrainingTerms t0 = random_terms(rng, 8, 8, 2, true);
    const TrainingTerms t1 = random_terms(rng, 8, 8, 2, true);
    const FilterParams params{};
    FilterState s = init_state(t0, params);
    const FilterState before = s;
    update_state(s, t1, 0.0);
    EXPECT_EQ(s.numerator, before.numerator);
    EXPECT_EQ(s.denominator, before.denominator);

    update_state(s, t1, 1.0);
    const FilterState fresh = init_state(t1, params);
    for (std::size_t d = 0; d < 2; ++d) {
        EXPECT_LT(max_diff(s.numerator[d], fresh.numerator[d]), 1e-12);
        EXPECT_LT(max_diff(s.filter[d], fresh.filter[d]), 1e-12);
    }
    for (double g : {-0.1, 1.1}) {
        try {
            update_state(s, t1, g);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::GammaOutOfRange);
        }
    }
}

TEST(Filter, RepeatedUpdatesForgetExponentially) {
    std::mt19937_64 rng(78);
    const TrainingTerms t0 = random_terms(rng, 6, 6, 2, true);
    const TrainingTerms t = random_terms(rng, 6, 6, 2, true);
    const double gamma = 0.3;
    FilterState s = init_state(t0, {});
    const auto steady_den = denominator_terms(t, s.params.lambda3);
    const auto start_den = s.denominator;
    for (int step = 1; step <= 10; ++step) {
        update_state(s, t, gamma);
        const double a = std::pow(1.0 - gamma, step);
        double dist = 0.0, dist0 = 0.0;
        for (std::size_t d = 0; d < 2; ++d)
            for (std::size_t i = 0; i < t.numerator[d].size(); ++i) {
                const Complex expect = a * t0.numerator[d].values()[i] + (1.0 - a) * t.numerator[d].values()[i];
                EXPECT_NEAR(std::abs(s.numerator[d].values()[i] - expect), 0.0, 1e-9);
                const double den_expect = a * start_den[d].values()[i] + (1.0 - a) * steady_den[d].values()[i];
                EXPECT_NEAR(s.denominator[d].values()[i], den_expect, 1e-9);
                dist += std::norm(s.numerator[d].values()[i] - t.numerator[d].values()[i]);
                dist0 += std::norm(t0.numerator[d].values()[i] - t.numerator[d].values()[i]);
            }
        EXPECT_NEAR(std::sqrt(dist), a * std::sqrt(dist0), 1e-9);
    }
}

TEST(Filter, ChannelWeightExamples) {
    std::mt19937_64 rng(79);
    FilterState s = init_state(random_terms(rng, 6, 6, 2, false), {});
    EXPECT_EQ(s.weights, (std::vector<double>{0.5, 0.5}));
    const std::vector<double> maxima{1.0, 2.0};
    blend_channel_weights(s, maxima, 0.0);
    EXPECT_EQ(s.weights, (std::vector<double>{0.5, 0.5}));
    blend_channel_weights(s, maxima, 1.0);
    EXPECT_NEAR(s.weights[0], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.weights[1], 2.0 / 3.0, 1e-15);

    // Degenerate maxima leave the weights alone.
    const std::vector<double> zeros{0.0, -1.0};
    blend_channel_weights(s, zeros, 0.5);
    EXPECT_NEAR(s.weights[0], 1.0 / 3.0, 1e-15);
}

TEST(Filter, ChannelWeightsFromResponses) {
    std::mt19937_64 rng(80);
    const Plane x = oracle::random_plane(rng, 8, 8);
    Plane x2 = x;
    for (auto& v : x2.values()) v *= 2.0;
    const Plane y = gaussian_label(8, 8, 1.0, 1.0);
    // Identical channels: weights stay uniform.
    FilterState same = init_state(train_terms(FeatureMap({x, x, x}), y, {}, nullptr, 0.0), {});
    update_channel_weights(same, spectra_of(FeatureMap({x, x, x})), 0.7);
    for (double c : same.weights) EXPECT_NEAR(c, 1.0 / 3.0, 1e-12);

    // Same filter on both channels, second channel's sample doubled: its maximum doubles.
    FilterState s = init_state(train_terms(FeatureMap({x, x}), y, {}, nullptr, 0.0), {});
    const auto z = spectra_of(FeatureMap({x, x2}));
    const auto maxima = channel_response_maxima(s, z);
    EXPECT_NEAR(maxima[1], 2.0 * maxima[0], 1e-10);
    update_channel_weights(s, z, 1.0);
    EXPECT_NEAR(s.weights[0], 1.0 / 3.0, 1e-10);
    EXPECT_NEAR(s.weights[1], 2.0 / 3.0, 1e-10);
    EXPECT_THROW(update_channel_weights(s, z, 1.5), Error);
}

TEST(Filter, WeightsStayOnSimplex) {
    std::mt19937_64 rng(81);
    std::uniform_real_distribution<double> u(-1.0, 3.0), e(0.0, 1.0);
    FilterState s = init_state(random_terms(rng, 4, 4, 10, false), {});
    for (int i = 0; i < 2000; ++i) {
        std::vector<double> maxima(10);
        for (auto& m : maxima) m = u(rng);
        blend_channel_weights(s, maxima, e(rng));
        double sum = 0.0;
        for (double c : s.weights) {
            EXPECT_GE(c, 0.0);
            sum += c;
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(Filter, DetectionRecoversCircularShift) {
    std::mt19937_64 rng(82);
    for (int D : {1, 3}) {
        std::vector<Plane> x;
        for (int d = 0; d < D; ++d) x.push_back(oracle::random_plane(rng, 16, 16));
        const Plane y = gaussian_label(16, 16, 1.0, 1.0);
        const FilterState s = init_state(train_terms(FeatureMap(x), y, {}, nullptr, 0.0), {});

        const ResponseMap r0 = detect(s, spectra_of(FeatureMap(x)));
        EXPECT_EQ(r0.peak_row, 0);
        EXPECT_EQ(r0.peak_col, 0);
        EXPECT_NEAR(r0.shift_rows, 0.0, 0.05);
        EXPECT_NEAR(r0.shift_cols, 0.0, 0.05);
        EXPECT_LT(r0.max_imag_residue, 1e-6 * max_abs(r0.values));

        std::vector<Plane> shifted;
        for (const auto& p : x) shifted.push_back(oracle::circshift(p, 2, 3));
        const ResponseMap r = detect(s, spectra_of(FeatureMap(shifted)));
        EXPECT_EQ(r.peak_row, 2);
        EXPECT_EQ(r.peak_col, 3);
        EXPECT_NEAR(r.shift_rows, 2.0, 0.05);
        EXPECT_NEAR(r.shift_cols, 3.0, 0.05);
        EXPECT_EQ(r.peak_value, *std::max_element(r.values.values().begin(), r.values.values().end()));
    }
}

TEST(Filter, DetectionResponseMatchesBruteForce) {
    std::mt19937_64 rng(83);
    const Plane x = oracle::random_plane(rng, 6, 7), z = oracle::random_plane(rng, 6, 7);
    const FilterState s = init_state(train_terms(single(x), gaussian_label(6, 7, 1.0, 1.0), {}, nullptr, 0.0), {});
    // R = w ⊛ z (circular convolution of the spatial filter with z), scaled by c = 1.
    const Plane w = transforms::idft2_real(s.filter[0]);
    Plane flipped(6, 7);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 7; ++c) flipped(r, c) = w.wrapped(-r, -c);
    const Plane expect = oracle::circular_xcorr(flipped, z);
    const ResponseMap r = detect(s, spectra_of(single(z)));
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(r.values.values()[i], expect.values()[i], 1e-10);
}

TEST(Filter, SubCellRefinementOfQuadraticPeak) {
    Plane r(9, 9);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x) {
            const double dy = y - 4.3, dx = x - 3.8;
            r(y, x) = 10.0 - dy * dy - 2.0 * dx * dx;
        }
    const auto [oy, ox] = refine_peak(r, 4, 4);
    EXPECT_NEAR(oy, 0.3, 1e-12);
    EXPECT_NEAR(ox, -0.2, 1e-12);
}

TEST(Filter, ParameterValidation) {
    EXPECT_THROW(validate(FilterParams{0.0}), Error);
    EXPECT_THROW(validate(FilterParams{1e-2, -1.0}), Error);
    try {
        validate(FilterParams{1e-2, 0.1, 0.1, 2.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::GammaOutOfRange);
    }
    EXPECT_THROW(validate(FilterParams{1e-2, 0.1, 0.1, 0.1, -0.1}), Error);
}
