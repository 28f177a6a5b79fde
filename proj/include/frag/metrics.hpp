// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// Model-free quality metrics. PSNR assumes a peak value of 1.0, identical
// inputs give +infinity.
//
// SSIM here: per frame and channel, non-overlapping 8x8 windows at stride 8
// (partial windows at the right/bottom border are skipped), population
// statistics inside each window, C1 = 0.01^2, C2 = 0.03^2; the score is the
// plain mean over all windows, channels and frames.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "frag/apf.hpp"
#include "frag/error.hpp"
#include "frag/tensor.hpp"

namespace frag {

template <class A, class B>
double mse(const Sequence<A>& a, const Sequence<B>& b)
{
    require_same_dims(a, b, "mse");
    auto x = a.data();
    auto y = b.data();
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
        s += d * d;
    }
    return s / double(x.size());
}

inline double psnr_from_mse(double m) noexcept
{
    if (m == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / m);
}

template <class A, class B>
double psnr(const Sequence<A>& a, const Sequence<B>& b)
{
    return psnr_from_mse(mse(a, b));
}

struct BandScores {
    double low = 0.0;
    double high = 0.0;
    double f_cut = 0.0;
};

/// PSNR of the low and high hard-mask bands of a and b separately.
template <class A, class B>
BandScores band_psnr(const Sequence<A>& a, const Sequence<B>& b, double f_cut = 0.25 * std::numbers::pi)
{
    require_same_dims(a, b, "band_psnr");
    const BandPair sa = band_split(a, f_cut);
    const BandPair sb = band_split(b, f_cut);
    return BandScores{psnr(sa.low, sb.low), psnr(sa.high, sb.high), f_cut};
}

inline constexpr std::size_t ssim_window = 8;
inline constexpr double ssim_c1 = 0.01 * 0.01;
inline constexpr double ssim_c2 = 0.03 * 0.03;

template <class A, class B>
double ssim(const Sequence<A>& a, const Sequence<B>& b)
{
    require_same_dims(a, b, "ssim");
    require(a.width() >= ssim_window && a.height() >= ssim_window, ErrorCode::invalid_argument,
            "ssim needs frames of at least 8x8");
    const double n = double(ssim_window * ssim_window);
    double total = 0.0;
    std::size_t windows = 0;
    for (std::size_t l = 0; l < a.frames(); ++l)
        for (std::size_t c = 0; c < a.channels(); ++c)
            for (std::size_t y0 = 0; y0 + ssim_window <= a.height(); y0 += ssim_window)
                for (std::size_t x0 = 0; x0 + ssim_window <= a.width(); x0 += ssim_window) {
                    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
                    for (std::size_t y = y0; y < y0 + ssim_window; ++y)
                        for (std::size_t x = x0; x < x0 + ssim_window; ++x) {
                            const double va = static_cast<double>(a(l, y, x, c));
                            const double vb = static_cast<double>(b(l, y, x, c));
                            sa += va;
                            sb += vb;
                            saa += va * va;
                            sbb += vb * vb;
                            sab += va * vb;
                        }
                    const double ma = sa / n, mb = sb / n;
                    const double va = saa / n - ma * ma;
                    const double vb = sbb / n - mb * mb;
                    const double cov = sab / n - ma * mb;
                    total += ((2 * ma * mb + ssim_c1) * (2 * cov + ssim_c2)) /
                             ((ma * ma + mb * mb + ssim_c1) * (va + vb + ssim_c2));
                    ++windows;
                }
    return total / double(windows);
}

/// PSNR over pixels where the mask is 1, the same mask applied to every frame
/// and channel of both inputs.
template <class A, class B>
double masked_psnr(const Sequence<A>& a, const Sequence<B>& b, const FrameMask& mask)
{
    require_same_dims(a, b, "masked_psnr");
    require(mask.width() == a.width() && mask.height() == a.height(),
            ErrorCode::dimension_mismatch, "mask dims do not match frames");
    require(mask.count() > 0, ErrorCode::empty_mask, "mask selects no pixels");
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t l = 0; l < a.frames(); ++l)
        for (std::size_t y = 0; y < a.height(); ++y)
            for (std::size_t x = 0; x < a.width(); ++x) {
                if (!mask(y, x))
                    continue;
                for (std::size_t c = 0; c < a.channels(); ++c) {
                    const double d =
                        static_cast<double>(a(l, y, x, c)) - static_cast<double>(b(l, y, x, c));
                    s += d * d;
                    ++n;
                }
            }
    return psnr_from_mse(s / double(n));
}

/// Mean cosine similarity of consecutive flattened frames. A model-free proxy
/// for embedding-based frame consistency, not comparable to it.
template <class T>
double frame_consistency(const Sequence<T>& v)
{
    require(v.frames() >= 2, ErrorCode::invalid_argument, "frame_consistency needs >= 2 frames");
    auto norm = [&](std::size_t l) {
        double s = 0.0;
        for (T x : v.frame(l))
            s += static_cast<double>(x) * static_cast<double>(x);
        return std::sqrt(s);
    };
    double total = 0.0;
    double prev_norm = norm(0);
    for (std::size_t l = 1; l < v.frames(); ++l) {
        const double cur_norm = norm(l);
        require(prev_norm > 0.0 && cur_norm > 0.0, ErrorCode::zero_norm,
                "frame " + std::to_string(prev_norm > 0.0 ? l : l - 1) + " has zero norm");
        auto a = v.frame(l - 1);
        auto b = v.frame(l);
        double dot = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
        total += dot / (prev_norm * cur_norm);
        prev_norm = cur_norm;
    }
    return total / double(v.frames() - 1);
}

} // namespace frag
