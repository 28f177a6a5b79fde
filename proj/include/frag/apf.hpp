// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// Adaptive frequency pass filter: a radially symmetric low-pass with a flat
// plateau of radius r and a Gaussian skirt of scale sigma beyond it,
//
//   gain(d) = 1                          d <= r
//   gain(d) = exp(-(d - r)^2 / 2 sigma^2)  d >  r
//
// with d the grid distance of a bin from DC. One 2-D filter is shared by all
// frames and channels of a step.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "frag/error.hpp"
#include "frag/io.hpp"
#include "frag/spectral.hpp"
#include "frag/tensor.hpp"

namespace frag {

class ApfFilter {
public:
    ApfFilter(double radius, double sigma, std::size_t width, std::size_t height)
        : radius_(radius), sigma_(sigma), width_(width), height_(height)
    {
        require(width >= 1 && height >= 1, ErrorCode::invalid_argument, "filter dims must be >= 1");
        require(std::isfinite(radius) && radius > 0.0 && radius < max_radius(width, height),
                ErrorCode::invalid_argument,
                "radius must lie in (0, " + std::to_string(max_radius(width, height)) + ")");
        require(std::isfinite(sigma) && sigma > 0.0, ErrorCode::invalid_argument,
                "sigma must be > 0");
        gains_.resize(width * height);
        const auto hw = std::ptrdiff_t(width / 2), hh = std::ptrdiff_t(height / 2);
        for (std::size_t v = 0; v < height; ++v)
            for (std::size_t u = 0; u < width; ++u) {
                const double d = std::hypot(double(std::ptrdiff_t(u) - hw),
                                            double(std::ptrdiff_t(v) - hh));
                gains_[v * width + u] = gain_at(d);
            }
    }

    double radius() const noexcept { return radius_; }
    double sigma() const noexcept { return sigma_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    /// Filter response at grid distance d from DC.
    double gain_at(double d) const noexcept
    {
        if (d <= radius_)
            return 1.0;
        const double t = d - radius_;
        return std::exp(-t * t / (2.0 * sigma_ * sigma_));
    }

    /// Gain of the center-shifted bin (v, u).
    double gain(std::size_t v, std::size_t u) const noexcept { return gains_[v * width_ + u]; }
    std::span<const double> gains() const noexcept { return gains_; }

private:
    double radius_;
    double sigma_;
    std::size_t width_;
    std::size_t height_;
    std::vector<double> gains_;
};

inline ApfFilter build_filter(double radius, double sigma, std::size_t width, std::size_t height)
{
    return ApfFilter(radius, sigma, width, height);
}

/// Multiply every plane of a spectrum by the filter gains, in place.
inline void apply_gains(const ApfFilter& filter, Spectrum& s)
{
    require(filter.width() == s.width() && filter.height() == s.height(),
            ErrorCode::dimension_mismatch, "filter grid does not match spectrum grid");
    auto g = filter.gains();
    for (std::size_t l = 0; l < s.frames(); ++l)
        for (std::size_t c = 0; c < s.channels(); ++c) {
            auto p = s.plane(l, c);
            for (std::size_t i = 0; i < p.size(); ++i)
                p[i] *= g[i];
        }
}

/// h = F^-1(gain * F(z)), real part kept.
template <class T>
Sequence<T> apply_filter(const ApfFilter& filter, const Sequence<T>& z)
{
    Spectrum s = forward_spectrum(z);
    apply_gains(filter, s);
    return inverse_spectrum<T>(s);
}

/// Same as apply_filter, reusing an already computed spectrum of z.
template <class T = float>
Sequence<T> apply_filter(const ApfFilter& filter, Spectrum s)
{
    apply_gains(filter, s);
    return inverse_spectrum<T>(s);
}

/// Grid distance corresponding to normalized frequency f on a frame of width W.
inline double cutoff_distance(double f_cut, std::size_t width) noexcept
{
    return f_cut * double(width / 2) / std::numbers::pi;
}

struct BandPair {
    Sequence<double> low;
    Sequence<double> high;
};

/// Exact split into d < d_cut and d >= d_cut parts with complementary hard
/// masks, so low + high reproduces z.
template <class T>
BandPair band_split(const Sequence<T>& z, double f_cut)
{
    require(f_cut > 0.0 && f_cut < std::numbers::pi, ErrorCode::invalid_argument,
            "f_cut must lie in (0, pi)");
    const double d_cut = cutoff_distance(f_cut, z.width());
    Spectrum low = forward_spectrum(z);
    Spectrum high = low;
    for (std::size_t l = 0; l < low.frames(); ++l)
        for (std::size_t c = 0; c < low.channels(); ++c) {
            auto pl = low.plane(l, c);
            auto ph = high.plane(l, c);
            for (std::size_t v = 0; v < low.height(); ++v)
                for (std::size_t u = 0; u < low.width(); ++u) {
                    const double d = std::hypot(double(low.freq_x(u)), double(low.freq_y(v)));
                    (d < d_cut ? ph : pl)[v * low.width() + u] = cplx{};
                }
        }
    return BandPair{inverse_spectrum<double>(low), inverse_spectrum<double>(high)};
}

/// Gains scaled to 0..255 as a grayscale image (DC at the center pixel).
inline Image filter_heatmap(const ApfFilter& filter)
{
    Image img;
    img.width = filter.width();
    img.height = filter.height();
    img.channels = 1;
    img.pixels.resize(img.width * img.height);
    auto g = filter.gains();
    for (std::size_t i = 0; i < g.size(); ++i)
        img.pixels[i] = static_cast<unsigned char>(std::lround(g[i] * 255.0));
    return img;
}

} // namespace frag
