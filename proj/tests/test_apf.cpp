// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "frag/apf.hpp"
#include "oracles.hpp"

using frag::Dims;

namespace {

constexpr double pi = std::numbers::pi;

/// DFT, multiply by exp(-(d - r)^2 / 2 sigma^2) outside the plateau, inverse DFT.
frag::Sequence<double> oracle_filter(const frag::LatentSequence& z, double r, double sigma)
{
    auto s = oracle::naive_dft(z);
    for (std::size_t l = 0; l < s.frames(); ++l)
        for (std::size_t c = 0; c < s.channels(); ++c)
            for (std::size_t v = 0; v < s.height(); ++v)
                for (std::size_t u = 0; u < s.width(); ++u) {
                    const double d = std::sqrt(double(s.freq_x(u) * s.freq_x(u) +
                                                      s.freq_y(v) * s.freq_y(v)));
                    const double g = d <= r ? 1.0 : std::exp(-(d - r) * (d - r) / (2 * sigma * sigma));
                    s.at(l, v, u, c) *= g;
                }
    return oracle::naive_idft(s).first;
}

} // namespace

TEST(ApfGain, PlateauAndSkirt)
{
    const frag::ApfFilter f(5.0, 0.25, 32, 32);
    EXPECT_EQ(f.gain_at(0.0), 1.0);
    EXPECT_EQ(f.gain_at(5.0), 1.0);
    EXPECT_NEAR(f.gain_at(5.25), std::exp(-0.5), 1e-15);
    EXPECT_NEAR(f.gain_at(5.25), 0.60653, 1e-5);
    EXPECT_NEAR(f.gain_at(6.0), std::exp(-8.0), 1e-18);
    EXPECT_NEAR(f.gain_at(6.0), 3.355e-4, 1e-7);
}

TEST(ApfGain, GridMatchesRadialFunction)
{
    const frag::ApfFilter f(3.3, 0.7, 9, 6);
    for (std::size_t v = 0; v < 6; ++v)
        for (std::size_t u = 0; u < 9; ++u) {
            const double d = std::hypot(double(u) - 4.0, double(v) - 3.0);
            EXPECT_DOUBLE_EQ(f.gain(v, u), f.gain_at(d));
        }
    EXPECT_EQ(f.gain(3, 4), 1.0);
}

TEST(ApfGain, RejectsOutOfRangeParameters)
{
    EXPECT_THROW(frag::build_filter(0.0, 0.25, 8, 8), frag::Error);
    EXPECT_THROW(frag::build_filter(-1.0, 0.25, 8, 8), frag::Error);
    EXPECT_THROW(frag::build_filter(frag::max_radius(8, 8), 0.25, 8, 8), frag::Error);
    EXPECT_THROW(frag::build_filter(2.0, 0.0, 8, 8), frag::Error);
    EXPECT_THROW(frag::build_filter(std::nan(""), 0.25, 8, 8), frag::Error);
    EXPECT_NO_THROW(frag::build_filter(std::nextafter(frag::max_radius(8, 8), 0.0), 0.25, 8, 8));
}

TEST(ApplyFilter, MatchesNaiveOracle)
{
    oracle::Rng rng(40);
    for (int trial = 0; trial < 3; ++trial) {
        const auto z = oracle::random_sequence(Dims{4, 16, 16, 2}, rng);
        const auto f = frag::build_filter(4.0, 0.25 + trial * 0.5, 16, 16);
        const auto fast = frag::apply_filter<double>(f, frag::Sequence<double>::convert(z));
        EXPECT_LT(oracle::max_abs_diff(fast, oracle_filter(z, 4.0, f.sigma())), 1e-6);
    }
}

TEST(ApplyFilter, AllPassAtMaximumRadius)
{
    oracle::Rng rng(41);
    const auto z = oracle::random_sequence(Dims{2, 16, 12, 2}, rng);
    const double r = std::nextafter(frag::max_radius(16, 12), 0.0);
    EXPECT_LT(oracle::max_abs_diff(frag::apply_filter(frag::build_filter(r, 0.25, 16, 12), z), z),
              1e-4);
}

TEST(ApplyFilter, ConstantInputUnchanged)
{
    const frag::LatentSequence z(3, 8, 8, 2, 0.7f);
    for (double r : {0.01, 1.0, 5.5}) {
        const auto out = frag::apply_filter(frag::build_filter(r, 0.25, 8, 8), z);
        EXPECT_LT(oracle::max_abs_diff(out, z), 1e-6) << r;
    }
}

TEST(ApplyFilter, SpectrumOverloadAgrees)
{
    oracle::Rng rng(42);
    const auto z = oracle::random_sequence<double>(Dims{2, 8, 8, 1}, rng);
    const auto f = frag::build_filter(2.5, 0.5, 8, 8);
    const auto a = frag::apply_filter(f, z);
    const auto b = frag::apply_filter<double>(f, frag::forward_spectrum(z));
    EXPECT_EQ(oracle::max_abs_diff(a, b), 0.0);
}

TEST(ApplyFilter, GridMismatchRejected)
{
    frag::Spectrum s(Dims{1, 8, 8, 1});
    EXPECT_THROW(frag::apply_gains(frag::build_filter(2.0, 0.25, 8, 4), s), frag::Error);
}

TEST(BandSplit, ReconstructsInput)
{
    oracle::Rng rng(43);
    const auto z = oracle::random_sequence(Dims{2, 16, 16, 3}, rng);
    const auto bands = frag::band_split(z, 0.25 * pi);
    double worst = 0;
    for (std::size_t i = 0; i < z.size(); ++i)
        worst = std::max(worst, std::abs(bands.low.data()[i] + bands.high.data()[i] - z.data()[i]));
    EXPECT_LT(worst, 1e-6);
}

TEST(BandSplit, ConstantVideoIsAllLow)
{
    const frag::LatentSequence z(2, 8, 8, 1, 0.3f);
    const auto bands = frag::band_split(z, 0.25 * pi);
    EXPECT_LT(oracle::max_abs_diff(bands.low, z), 1e-9);
    for (double v : bands.high.data())
        EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(BandSplit, AxisCosineAboveCutIsAllHigh)
{
    const std::size_t W = 32, k = W / 4;
    frag::LatentSequence z(1, W, W, 1);
    for (std::size_t y = 0; y < W; ++y)
        for (std::size_t x = 0; x < W; ++x)
            z(0, y, x, 0) = float(std::cos(2 * pi * double(k * x) / double(W)));
    EXPECT_NEAR(frag::cutoff_distance(0.25 * pi, W), double(W) / 8, 1e-12);
    const auto bands = frag::band_split(z, 0.25 * pi);
    for (double v : bands.low.data())
        EXPECT_NEAR(v, 0.0, 1e-9);
    EXPECT_LT(oracle::max_abs_diff(bands.high, z), 1e-6);
}

TEST(BandSplit, RejectsBadCut)
{
    const frag::LatentSequence z(1, 4, 4, 1);
    EXPECT_THROW(frag::band_split(z, 0.0), frag::Error);
    EXPECT_THROW(frag::band_split(z, pi), frag::Error);
}

TEST(Heatmap, CenterIsFullScale)
{
    const auto img = frag::filter_heatmap(frag::build_filter(8.0, 0.25, 64, 64));
    EXPECT_EQ(img.width, 64u);
    EXPECT_EQ(img.channels, 1u);
    EXPECT_EQ(img.pixels[32 * 64 + 32], 255);
    EXPECT_EQ(img.pixels[0], 0);
}
