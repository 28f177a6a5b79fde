// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "frag/fft.hpp"
#include "frag/spectral.hpp"
#include "oracles.hpp"

using frag::Dims;
using frag::Spectrum;
using oracle::cplx;

namespace {

constexpr double pi = std::numbers::pi;

double spectrum_diff(const Spectrum& a, const Spectrum& b)
{
    double worst = 0;
    for (std::size_t i = 0; i < a.bins().size(); ++i)
        worst = std::max(worst, std::abs(a.bins()[i] - b.bins()[i]));
    return worst;
}

std::size_t u_of(const Spectrum& s, std::ptrdiff_t fx) { return std::size_t(fx + s.half_width()); }
std::size_t v_of(const Spectrum& s, std::ptrdiff_t fy) { return std::size_t(fy + s.half_height()); }

} // namespace

// ---------------------------------------------------------------------------
// FFT

class FftLength : public ::testing::TestWithParam<std::size_t> {};

TEST_P(FftLength, MatchesDirectSum)
{
    const std::size_t n = GetParam();
    oracle::Rng rng(n);
    std::vector<cplx> x(n);
    for (auto& v : x)
        v = cplx(rng.normal(), rng.normal());
    auto y = x;
    frag::FftPlan plan(n);
    plan.forward(y);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j)
            acc += x[j] * std::polar(1.0, -2.0 * pi * double(j * k % n) / double(n));
        ASSERT_NEAR(std::abs(acc - y[k]), 0.0, 1e-9 * double(n)) << "k=" << k;
    }
    plan.inverse(y);
    for (std::size_t j = 0; j < n; ++j)
        ASSERT_NEAR(std::abs(y[j] - x[j]), 0.0, 1e-12 * double(n));
}

INSTANTIATE_TEST_SUITE_P(Lengths, FftLength,
                         ::testing::Values(1, 2, 3, 4, 5, 7, 8, 12, 16, 17, 31, 64, 100, 128));

// ---------------------------------------------------------------------------
// forward / inverse

TEST(ForwardSpectrum, ConstantFrameIsDcOnly)
{
    const double c = 0.375;
    frag::LatentSequence z(1, 8, 6, 1, float(c));
    const Spectrum s = frag::forward_spectrum(z);
    for (std::size_t v = 0; v < 6; ++v)
        for (std::size_t u = 0; u < 8; ++u) {
            const double mag = std::abs(s.at(0, v, u, 0));
            if (s.freq_x(u) == 0 && s.freq_y(v) == 0)
                EXPECT_NEAR(mag, c * 8 * 6, 1e-12);
            else
                EXPECT_NEAR(mag, 0.0, 1e-12);
        }
}

TEST(ForwardSpectrum, CosineGivesSymmetricPair)
{
    const std::size_t W = 16, H = 8, k = 3;
    frag::LatentSequence z(1, W, H, 1);
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x)
            z(0, y, x, 0) = float(std::cos(2 * pi * double(k * x) / double(W)));
    const Spectrum s = frag::forward_spectrum(z);
    const Spectrum ref = oracle::naive_dft(z);
    EXPECT_LT(spectrum_diff(s, ref), 1e-9);
    for (std::size_t v = 0; v < H; ++v)
        for (std::size_t u = 0; u < W; ++u) {
            const bool hot = s.freq_y(v) == 0 && std::abs(s.freq_x(u)) == std::ptrdiff_t(k);
            EXPECT_NEAR(std::abs(s.at(0, v, u, 0)), hot ? double(W * H) / 2 : 0.0, 1e-4);
        }
}

TEST(ForwardSpectrum, MatchesNaiveDftOnOddAndEvenGrids)
{
    oracle::Rng rng(11);
    for (Dims d : {Dims{2, 8, 8, 2}, Dims{1, 5, 7, 3}, Dims{3, 6, 9, 1}}) {
        const auto z = oracle::random_sequence(d, rng);
        EXPECT_LT(spectrum_diff(frag::forward_spectrum(z), oracle::naive_dft(z)), 1e-9)
            << frag::to_string(d);
    }
}

TEST(ForwardSpectrum, ConjugateSymmetryOfRealInput)
{
    oracle::Rng rng(12);
    const auto z = oracle::random_sequence(Dims{1, 8, 6, 1}, rng);
    const Spectrum s = frag::forward_spectrum(z);
    for (std::size_t v = 0; v < 6; ++v)
        for (std::size_t u = 0; u < 8; ++u) {
            const auto fx = s.freq_x(u), fy = s.freq_y(v);
            // Mirror bin, wrapped onto the shifted grid.
            const auto mu = std::size_t(((-fx % 8) + 8) % 8);
            const auto mv = std::size_t(((-fy % 6) + 6) % 6);
            const std::size_t u2 = (mu + 4) % 8, v2 = (mv + 3) % 6;
            EXPECT_NEAR(std::abs(s.at(0, v, u, 0) - std::conj(s.at(0, v2, u2, 0))), 0.0, 1e-9);
        }
}

TEST(InverseSpectrum, DcOnlyGivesConstantOne)
{
    Spectrum s(Dims{1, 8, 8, 1});
    s.at(0, v_of(s, 0), u_of(s, 0), 0) = cplx(64.0, 0.0);
    const auto z = frag::inverse_spectrum<double>(s);
    for (double v : z.data())
        EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(InverseSpectrum, MatchesNaiveOracleOnConjugateSymmetricSpectrum)
{
    oracle::Rng rng(13);
    const auto z = oracle::random_sequence<double>(Dims{2, 6, 8, 2}, rng);
    Spectrum s = oracle::naive_dft(z);  // random and conjugate symmetric by construction
    double imag = -1;
    const auto fast = frag::inverse_spectrum<double>(s, &imag);
    const auto [re, im] = oracle::naive_idft(s);
    EXPECT_LT(oracle::max_abs_diff(fast, re), 1e-6);
    EXPECT_LT(imag, 1e-9);
    EXPECT_LT(oracle::max_abs_diff(fast, z), 1e-9);
}

TEST(InverseSpectrum, ReportsImaginaryResidue)
{
    Spectrum s(Dims{1, 4, 4, 1});
    s.at(0, 2, 3, 0) = cplx(16.0, 0.0);  // unpaired bin: complex output
    double imag = 0;
    frag::inverse_spectrum<double>(s, &imag);
    EXPECT_NEAR(imag, 1.0, 1e-12);
}

TEST(RoundTrip, DefaultShapeWithinTolerance)
{
    oracle::Rng rng(14);
    const auto z = oracle::random_sequence(Dims{48, 64, 64, 4}, rng);
    const auto s = frag::forward_spectrum(z);
    EXPECT_LT(oracle::max_abs_diff(frag::inverse_spectrum<float>(s), z), 1e-4);

    double energy_x = 0, energy_s = 0;
    for (float v : z.data())
        energy_x += double(v) * double(v);
    for (const auto& b : s.bins())
        energy_s += std::norm(b);
    EXPECT_NEAR(energy_s / (64.0 * 64.0), energy_x, 1e-6 * energy_x);
}

// ---------------------------------------------------------------------------
// differential and moments

TEST(Differential, EqualInputsGiveZero)
{
    oracle::Rng rng(20);
    const auto s = frag::forward_spectrum(oracle::random_sequence(Dims{2, 4, 4, 1}, rng));
    const auto d = frag::differential_spectrum(s, s);
    for (const auto& b : d.bins())
        EXPECT_EQ(b, cplx{});
}

TEST(Differential, ZeroPreviousGivesCurrent)
{
    oracle::Rng rng(21);
    const auto s = frag::forward_spectrum(oracle::random_sequence(Dims{2, 4, 4, 1}, rng));
    const auto d = frag::differential_spectrum(s, Spectrum(s.dims()));
    EXPECT_EQ(spectrum_diff(d, s), 0.0);
}

TEST(Differential, MatchesElementwiseLoop)
{
    oracle::Rng rng(22);
    const Dims dims{2, 5, 4, 3};
    const auto a = frag::forward_spectrum(oracle::random_sequence(dims, rng));
    const auto b = frag::forward_spectrum(oracle::random_sequence(dims, rng));
    const auto d = frag::differential_spectrum(a, b);
    for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t v = 0; v < 4; ++v)
            for (std::size_t u = 0; u < 5; ++u)
                for (std::size_t c = 0; c < 3; ++c)
                    ASSERT_EQ(d.at(l, v, u, c), a.at(l, v, u, c) - b.at(l, v, u, c));
}

TEST(Differential, DimsMustMatch)
{
    EXPECT_THROW(frag::differential_spectrum(Spectrum(Dims{1, 4, 4, 1}), Spectrum(Dims{1, 4, 2, 1})),
                 frag::Error);
}

TEST(Moments, PointMass)
{
    Spectrum s(Dims{1, 32, 32, 1});
    s.at(0, v_of(s, 3), u_of(s, 5), 0) = cplx(0.0, 2.5);
    const auto m = frag::spatial_moments(frag::DifferentialSpectrum(s));
    EXPECT_EQ(m.mx, 5.0);
    EXPECT_EQ(m.my, 3.0);
    EXPECT_NEAR(m.distance(), std::sqrt(34.0), 1e-12);
    EXPECT_NEAR(m.distance(), 5.831, 1e-3);
}

TEST(Moments, SymmetricPair)
{
    Spectrum s(Dims{2, 16, 16, 2});
    for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t c = 0; c < 2; ++c) {
            s.at(l, v_of(s, 1), u_of(s, 1), c) = cplx(1.0, 0.0);
            s.at(l, v_of(s, 3), u_of(s, 3), c) = cplx(0.0, -1.0);
        }
    const auto m = frag::spatial_moments(frag::DifferentialSpectrum(s));
    EXPECT_EQ(m.mx, 2.0);
    EXPECT_EQ(m.my, 2.0);
    EXPECT_NEAR(m.distance(), 2.0 * std::sqrt(2.0), 1e-15);
}

TEST(Moments, IgnoresAxesAndOtherQuadrants)
{
    Spectrum s(Dims{1, 16, 16, 1});
    s.at(0, v_of(s, 2), u_of(s, 4), 0) = 1.0;
    s.at(0, v_of(s, 0), u_of(s, 6), 0) = 100.0;   // on the x axis
    s.at(0, v_of(s, 5), u_of(s, 0), 0) = 100.0;   // on the y axis
    s.at(0, v_of(s, -3), u_of(s, -3), 0) = 100.0; // negative quadrant
    s.at(0, v_of(s, -3), u_of(s, 3), 0) = 100.0;
    const auto m = frag::spatial_moments(frag::DifferentialSpectrum(s));
    EXPECT_EQ(m.mx, 4.0);
    EXPECT_EQ(m.my, 2.0);
}

TEST(Moments, MatchBruteForceOnRandomDifferentials)
{
    oracle::Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const Dims d{1 + rng.index(3), 4 + rng.index(13), 4 + rng.index(13), 1 + rng.index(3)};
        const auto a = frag::forward_spectrum(oracle::random_sequence(d, rng));
        const auto b = frag::forward_spectrum(oracle::random_sequence(d, rng));
        const auto dz = frag::differential_spectrum(a, b);
        double mx = 0, my = 0;
        ASSERT_TRUE(oracle::brute_moments(dz, mx, my));
        const auto m = frag::spatial_moments(dz);
        EXPECT_NEAR(m.mx, mx, 1e-9 * mx);
        EXPECT_NEAR(m.my, my, 1e-9 * my);
    }
}

TEST(Moments, DegenerateWhenQuadrantEmpty)
{
    frag::LatentSequence flat(2, 8, 8, 1, 0.25f);
    const auto s = frag::forward_spectrum(flat);
    try {
        frag::spatial_moments(frag::differential_spectrum(s, Spectrum(s.dims())));
        FAIL() << "expected degenerate_input";
    } catch (const frag::Error& e) {
        EXPECT_EQ(e.code(), frag::ErrorCode::degenerate_input);
    }
    // A 1-pixel-wide grid has no positive quadrant at all.
    EXPECT_THROW(frag::spatial_moments(frag::DifferentialSpectrum(Spectrum(Dims{1, 1, 4, 1}))),
                 frag::Error);
}

TEST(AdaptedRadius, Examples)
{
    const frag::MomentPoint m{5.0, 3.0};
    EXPECT_NEAR(frag::adapted_radius(m, 6.0, 64, 64), std::sqrt(34.0) + 6.0, 1e-12);
    EXPECT_NEAR(frag::adapted_radius(m, 6.0, 64, 64), 11.831, 1e-3);
    EXPECT_EQ(frag::adapted_radius({}, 6.0, 64, 64), 6.0);

    const double rmax = std::sqrt(32.0 * 32 + 32.0 * 32);
    EXPECT_NEAR(frag::max_radius(64, 64), 45.254, 1e-3);
    const double r = frag::adapted_radius({100.0, 0.0}, 6.0, 64, 64);
    EXPECT_LT(r, rmax);
    EXPECT_NEAR(r, rmax, 1e-12);
}

TEST(AdaptedRadius, ZeroMarginAtDcStaysPositive)
{
    EXPECT_GT(frag::adapted_radius({}, 0.0, 8, 8), 0.0);
    EXPECT_THROW(frag::adapted_radius({}, -1.0, 8, 8), frag::Error);
}

// ---------------------------------------------------------------------------
// radial profile

TEST(RadialProfile, DcOnly)
{
    Spectrum s(Dims{1, 16, 16, 1});
    s.at(0, 8, 8, 0) = 3.0;
    const auto p = frag::radial_profile(s, 8);
    EXPECT_GT(p.mean_magnitude[0], 0.0);
    for (std::size_t b = 1; b < 8; ++b)
        EXPECT_EQ(p.mean_magnitude[b], 0.0);
}

TEST(RadialProfile, WhiteNoiseIsFlat)
{
    oracle::Rng rng(30);
    frag::LatentSequence z(1, 100, 100, 1);
    for (auto& v : z.data())
        v = float(rng.normal());
    const auto p = frag::radial_profile(frag::forward_spectrum(z), 8);
    const auto [lo, hi] = std::minmax_element(p.mean_magnitude.begin(), p.mean_magnitude.end());
    EXPECT_LT(*hi / *lo, 2.0);
}

TEST(RadialProfile, RingImpulseHitsOneBin)
{
    const std::size_t W = 64, bins = 32;
    Spectrum s(Dims{1, W, W, 1});
    for (std::size_t v = 0; v < W; ++v)
        for (std::size_t u = 0; u < W; ++u) {
            const double d = std::hypot(double(s.freq_x(u)), double(s.freq_y(v)));
            if (d >= 16.0 && d < 16.5)
                s.at(0, v, u, 0) = 1.0;
        }
    const auto p = frag::radial_profile(s, bins);
    std::size_t hot = 0, hot_bin = 0;
    for (std::size_t b = 0; b < bins; ++b)
        if (p.mean_magnitude[b] > 0) {
            ++hot;
            hot_bin = b;
        }
    EXPECT_EQ(hot, 1u);
    EXPECT_NEAR(p.bin_center(hot_bin), 0.5 * pi, pi / double(bins));
}

TEST(RadialProfile, NyquistInLastBinCornersIgnored)
{
    Spectrum s(Dims{1, 8, 8, 1});
    s.at(0, 4, 0, 0) = 2.0;  // fx = -4: d = W/2, f = pi
    s.at(0, 0, 0, 0) = 50.0; // corner, d > W/2
    const auto p = frag::radial_profile(s, 4);
    EXPECT_GT(p.mean_magnitude[3], 0.0);
    for (std::size_t b = 0; b < 3; ++b)
        EXPECT_EQ(p.mean_magnitude[b], 0.0);
    EXPECT_NEAR(frag::normalized_frequency(4.0, 8), pi, 1e-15);
}

TEST(RadialProfile, RejectsBadArguments)
{
    EXPECT_THROW(frag::radial_profile(Spectrum(Dims{1, 8, 8, 1}), 1), frag::Error);
    EXPECT_THROW(frag::radial_profile(Spectrum(Dims{1, 8, 4, 1}), 4), frag::Error);
}
