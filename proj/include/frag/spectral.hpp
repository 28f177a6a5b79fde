// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// Per-frame 2-D spectra on a center-shifted grid, differential spectra,
// spectral centroids ("spatial moments") and radius adaption.
//
// Grid convention: the DC bin of a W x H plane sits at (u, v) = (W/2, H/2)
// (integer division). Frequency coordinates are x = u - W/2, y = v - H/2 in
// grid cells. Forward transforms are unnormalized; inverses scale by 1/(W*H).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "frag/error.hpp"
#include "frag/fft.hpp"
#include "frag/parallel.hpp"
#include "frag/tensor.hpp"

namespace frag {

class Spectrum {
public:
    Spectrum() = default;

    explicit Spectrum(Dims dims) : dims_(dims)
    {
        require(dims.valid(), ErrorCode::invalid_argument, "spectrum dims must all be >= 1");
        bins_.assign(dims.size(), cplx{});
    }

    const Dims& dims() const noexcept { return dims_; }
    std::size_t frames() const noexcept { return dims_.frames; }
    std::size_t width() const noexcept { return dims_.width; }
    std::size_t height() const noexcept { return dims_.height; }
    std::size_t channels() const noexcept { return dims_.channels; }

    std::ptrdiff_t half_width() const noexcept { return std::ptrdiff_t(dims_.width / 2); }
    std::ptrdiff_t half_height() const noexcept { return std::ptrdiff_t(dims_.height / 2); }
    std::ptrdiff_t freq_x(std::size_t u) const noexcept { return std::ptrdiff_t(u) - half_width(); }
    std::ptrdiff_t freq_y(std::size_t v) const noexcept { return std::ptrdiff_t(v) - half_height(); }

    /// Bins are stored plane by plane; plane (l, c) is an H x W row-major grid.
    std::span<cplx> plane(std::size_t l, std::size_t c) noexcept
    {
        return std::span<cplx>(bins_).subspan(plane_index(l, c) * plane_size(), plane_size());
    }
    std::span<const cplx> plane(std::size_t l, std::size_t c) const noexcept
    {
        return std::span<const cplx>(bins_).subspan(plane_index(l, c) * plane_size(),
                                                    plane_size());
    }

    cplx& at(std::size_t l, std::size_t v, std::size_t u, std::size_t c) noexcept
    {
        return plane(l, c)[v * dims_.width + u];
    }
    const cplx& at(std::size_t l, std::size_t v, std::size_t u, std::size_t c) const noexcept
    {
        return plane(l, c)[v * dims_.width + u];
    }

    std::span<cplx> bins() noexcept { return bins_; }
    std::span<const cplx> bins() const noexcept { return bins_; }

    std::size_t plane_size() const noexcept { return dims_.width * dims_.height; }
    std::size_t plane_count() const noexcept { return dims_.frames * dims_.channels; }

private:
    std::size_t plane_index(std::size_t l, std::size_t c) const noexcept
    {
        return l * dims_.channels + c;
    }

    Dims dims_{};
    std::vector<cplx> bins_;
};

/// Bin-wise difference of two consecutive steps' spectra.
class DifferentialSpectrum : public Spectrum {
public:
    DifferentialSpectrum() = default;
    explicit DifferentialSpectrum(Spectrum s) : Spectrum(std::move(s)) {}
};

namespace detail {

/// Separable 2-D transform of one H x W plane stored row-major, in place.
inline void transform_plane(std::span<cplx> plane, std::size_t w, std::size_t h,
                            const FftPlan& row_plan, const FftPlan& col_plan, bool inverse)
{
    for (std::size_t y = 0; y < h; ++y) {
        auto row = plane.subspan(y * w, w);
        inverse ? row_plan.inverse(row) : row_plan.forward(row);
    }
    std::vector<cplx> col(h);
    for (std::size_t x = 0; x < w; ++x) {
        for (std::size_t y = 0; y < h; ++y)
            col[y] = plane[y * w + x];
        inverse ? col_plan.inverse(col) : col_plan.forward(col);
        for (std::size_t y = 0; y < h; ++y)
            plane[y * w + x] = col[y];
    }
}

} // namespace detail

/// Per-frame, per-channel unnormalized 2-D DFT, center-shifted.
template <class T>
Spectrum forward_spectrum(const Sequence<T>& z)
{
    const Dims d = z.dims();
    Spectrum s(d);
    const FftPlan row_plan(d.width);
    const FftPlan col_plan(d.height);
    const std::size_t hw = d.width / 2, hh = d.height / 2;
    parallel_for(s.plane_count(), [&](std::size_t p) {
        const std::size_t l = p / d.channels, c = p % d.channels;
        std::vector<cplx> buf(d.width * d.height);
        for (std::size_t y = 0; y < d.height; ++y)
            for (std::size_t x = 0; x < d.width; ++x)
                buf[y * d.width + x] = cplx(static_cast<double>(z(l, y, x, c)), 0.0);
        detail::transform_plane(buf, d.width, d.height, row_plan, col_plan, false);
        auto out = s.plane(l, c);
        for (std::size_t ky = 0; ky < d.height; ++ky) {
            const std::size_t v = (ky + hh) % d.height;
            for (std::size_t kx = 0; kx < d.width; ++kx)
                out[v * d.width + (kx + hw) % d.width] = buf[ky * d.width + kx];
        }
    });
    return s;
}

/// Inverse of forward_spectrum. The imaginary part of the result is dropped;
/// its largest magnitude is reported through `max_imag` when given.
template <class T = float>
Sequence<T> inverse_spectrum(const Spectrum& s, double* max_imag = nullptr)
{
    const Dims d = s.dims();
    Sequence<T> z(d);
    const FftPlan row_plan(d.width);
    const FftPlan col_plan(d.height);
    const std::size_t hw = d.width / 2, hh = d.height / 2;
    std::vector<double> residue(s.plane_count(), 0.0);
    parallel_for(s.plane_count(), [&](std::size_t p) {
        const std::size_t l = p / d.channels, c = p % d.channels;
        std::vector<cplx> buf(d.width * d.height);
        auto in = s.plane(l, c);
        for (std::size_t ky = 0; ky < d.height; ++ky) {
            const std::size_t v = (ky + hh) % d.height;
            for (std::size_t kx = 0; kx < d.width; ++kx)
                buf[ky * d.width + kx] = in[v * d.width + (kx + hw) % d.width];
        }
        detail::transform_plane(buf, d.width, d.height, row_plan, col_plan, true);
        double worst = 0.0;
        for (std::size_t y = 0; y < d.height; ++y)
            for (std::size_t x = 0; x < d.width; ++x) {
                const cplx v = buf[y * d.width + x];
                z(l, y, x, c) = static_cast<T>(v.real());
                worst = std::max(worst, std::abs(v.imag()));
            }
        residue[p] = worst;
    });
    if (max_imag) {
        *max_imag = 0.0;
        for (double r : residue)
            *max_imag = std::max(*max_imag, r);
    }
    return z;
}

inline DifferentialSpectrum differential_spectrum(const Spectrum& current, const Spectrum& previous)
{
    require(current.dims() == previous.dims(), ErrorCode::dimension_mismatch,
            "differential_spectrum: dims " + to_string(current.dims()) + " vs " +
                to_string(previous.dims()));
    Spectrum out(current.dims());
    auto o = out.bins();
    auto a = current.bins();
    auto b = previous.bins();
    for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = a[i] - b[i];
    return DifferentialSpectrum(std::move(out));
}

/// Intensity-weighted centroid of a differential spectrum's positive quadrant.
struct MomentPoint {
    double mx = 0.0;
    double my = 0.0;

    double distance() const noexcept { return std::hypot(mx, my); }
};

/// Positive-quadrant weights (x > 0, y > 0): |Z| averaged over frames and
/// channels, indexed [y - 1][x - 1].
struct QuadrantWeights {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> w;
    double total_all_bins = 0.0;
};

inline QuadrantWeights quadrant_weights(const Spectrum& z)
{
    QuadrantWeights q;
    const std::size_t W = z.width(), H = z.height();
    const std::size_t u0 = W / 2 + 1, v0 = H / 2 + 1;
    q.nx = W > u0 ? W - u0 : 0;
    q.ny = H > v0 ? H - v0 : 0;
    q.w.assign(q.nx * q.ny, 0.0);
    const double norm = 1.0 / double(z.plane_count());
    for (std::size_t l = 0; l < z.frames(); ++l)
        for (std::size_t c = 0; c < z.channels(); ++c) {
            auto p = z.plane(l, c);
            for (std::size_t v = 0; v < H; ++v)
                for (std::size_t u = 0; u < W; ++u) {
                    const double mag = magnitude(p[v * W + u]);
                    q.total_all_bins += mag * norm;
                    if (u >= u0 && v >= v0)
                        q.w[(v - v0) * q.nx + (u - u0)] += mag * norm;
                }
        }
    return q;
}

/// Weighted centroid (M_x, M_y) of |Z| over bins with x > 0 and y > 0.
/// Throws degenerate_input when that quadrant carries no weight, measured
/// relative to the whole spectrum so transform round-off does not count.
inline MomentPoint spatial_moments(const DifferentialSpectrum& z)
{
    const QuadrantWeights q = quadrant_weights(z);
    double sum = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < q.ny; ++j)
        for (std::size_t i = 0; i < q.nx; ++i) {
            const double w = q.w[j * q.nx + i];
            sum += w;
            sx += double(i + 1) * w;
            sy += double(j + 1) * w;
        }
    require(sum > 0.0 && sum > 1e-12 * q.total_all_bins, ErrorCode::degenerate_input,
            "differential spectrum has no energy in the positive quadrant");
    return MomentPoint{sx / sum, sy / sum};
}

/// Upper bound of the plateau radius: sqrt((W/2)^2 + (H/2)^2).
inline double max_radius(std::size_t width, std::size_t height) noexcept
{
    return std::hypot(double(width) / 2.0, double(height) / 2.0);
}

/// r = |M| + d0, clamped into the open interval (0, max_radius).
inline double adapted_radius(const MomentPoint& m, double d0, std::size_t width, std::size_t height)
{
    require(d0 >= 0.0 && std::isfinite(d0), ErrorCode::invalid_argument, "margin d0 must be >= 0");
    const double hi = std::nextafter(max_radius(width, height), 0.0);
    const double r = m.distance() + d0;
    return std::clamp(r, std::numeric_limits<double>::min(), hi);
}

/// Mean spectral magnitude in equal-width rings of normalized frequency
/// f = pi * d / (W/2); bin b covers [b*pi/n, (b+1)*pi/n), f = pi lands in the
/// last bin and corner bins beyond f = pi are ignored.
struct RadialProfile {
    std::vector<double> mean_magnitude;

    std::size_t bins() const noexcept { return mean_magnitude.size(); }
    double bin_center(std::size_t b) const noexcept
    {
        return (double(b) + 0.5) * std::numbers::pi / double(bins());
    }
};

/// Normalized frequency of grid distance d on a frame of width `width`.
inline double normalized_frequency(double d, std::size_t width) noexcept
{
    return std::numbers::pi * d / double(width / 2);
}

inline RadialProfile radial_profile(const Spectrum& s, std::size_t n_bins)
{
    require(n_bins >= 2, ErrorCode::invalid_argument, "radial_profile needs at least 2 bins");
    require(s.width() == s.height(), ErrorCode::invalid_argument,
            "radial_profile needs square frames");
    require(s.width() >= 2, ErrorCode::invalid_argument, "radial_profile needs width >= 2");
    const std::size_t W = s.width();
    const double half = double(W / 2);
    std::vector<std::ptrdiff_t> bin_of(s.plane_size(), -1);
    std::vector<double> count(n_bins, 0.0);
    for (std::size_t v = 0; v < W; ++v)
        for (std::size_t u = 0; u < W; ++u) {
            const double d = std::hypot(double(s.freq_x(u)), double(s.freq_y(v)));
            if (d > half)
                continue;
            auto b = static_cast<std::size_t>(std::floor(d * double(n_bins) / half));
            b = std::min(b, n_bins - 1);
            bin_of[v * W + u] = std::ptrdiff_t(b);
            count[b] += 1.0;
        }
    RadialProfile prof;
    prof.mean_magnitude.assign(n_bins, 0.0);
    for (std::size_t l = 0; l < s.frames(); ++l)
        for (std::size_t c = 0; c < s.channels(); ++c) {
            auto p = s.plane(l, c);
            for (std::size_t i = 0; i < p.size(); ++i)
                if (bin_of[i] >= 0)
                    prof.mean_magnitude[std::size_t(bin_of[i])] += magnitude(p[i]);
        }
    for (std::size_t b = 0; b < n_bins; ++b)
        if (count[b] > 0)
            prof.mean_magnitude[b] /= count[b] * double(s.plane_count());
    return prof;
}

} // namespace frag
