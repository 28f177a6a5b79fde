// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic denoising trajectories. A clean video x0 is revealed from low to
// high spatial frequency while additive noise fades out:
//
//   z_t = lowpass(x0, r*(t)) + eta(t) * n_t
//   r*(t)  = r_min + (r_max - r_min) * (1 - t/T)^p      (non-increasing in t)
//   eta(t) = eta_max * (t/T)^decay                       (non-decreasing in t)
//
// lowpass keeps bins with grid distance d <= r*(t). n_t is standard normal
// noise from mt19937_64 (seeded with splitmix64 of (seed, t)) through the
// Box-Muller transform, one draw pair per two samples in payload order. Both
// generators are fully specified, so trajectories are identical across
// toolchains.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "frag/error.hpp"
#include "frag/spectral.hpp"
#include "frag/tensor.hpp"

namespace frag {

inline constexpr std::string_view pattern_names[] = {"moving-edge", "smooth-gradient", "two-scene"};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Deterministic standard-normal stream.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    double next()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1], u2 in [0, 1), 53-bit resolution.
        const double u1 = 1.0 - double(engine_() >> 11) * 0x1.0p-53;
        const double u2 = double(engine_() >> 11) * 0x1.0p-53;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = mag * std::sin(ang);
        has_spare_ = true;
        return mag * std::cos(ang);
    }

    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Procedural test videos, values in [0, 1].
///   moving-edge     sharp-edged blobs (a thresholded smooth random field)
///                   sliding one cell per frame; broadband in every direction
///   smooth-gradient one-cycle cosine ramps drifting slowly; only |f| <= 1 cell
///   two-scene       a coarse ramp for the first half, then a brighter coarse
///                   ramp plus fixed fine texture for the second half; frame
///                   brightness drifts in nested pairs / fours / eights
inline LatentSequence make_test_video(std::string_view pattern, std::size_t frames,
                                      std::size_t width, std::size_t height, std::size_t channels,
                                      std::uint64_t seed)
{
    LatentSequence v(frames, width, height, channels);
    GaussianStream rng(seed ^ 0x5eedull);
    const double W = double(width), H = double(height);
    const double tau = 2.0 * std::numbers::pi;

    if (pattern == "moving-edge") {
        // Threshold a smooth random field into sharp-edged blobs, then slide
        // the whole picture one cell per frame along x and y.
        struct Wave {
            double kx, ky, phase;
        };
        std::vector<Wave> waves(24);
        for (auto& w : waves) {
            w.kx = std::floor(rng.uniform() * 7.0) - 3.0;
            w.ky = std::floor(rng.uniform() * 7.0) - 3.0;
            w.phase = tau * rng.uniform();
        }
        std::vector<double> level(channels);
        for (auto& lv : level)
            lv = 0.6 + 0.2 * rng.uniform();
        std::vector<char> inside(width * height);
        for (std::size_t y = 0; y < height; ++y)
            for (std::size_t x = 0; x < width; ++x) {
                double field = 0.0;
                for (const auto& w : waves)
                    field += std::cos(tau * (w.kx * double(x) / W + w.ky * double(y) / H) + w.phase);
                inside[y * width + x] = field > 0.0;
            }
        for (std::size_t l = 0; l < frames; ++l)
            for (std::size_t y = 0; y < height; ++y)
                for (std::size_t x = 0; x < width; ++x) {
                    const bool in = inside[((y + l) % height) * width + (x + l) % width];
                    for (std::size_t c = 0; c < channels; ++c)
                        v(l, y, x, c) = in ? float(level[c]) : 0.15f;
                }
        return v;
    }
    if (pattern == "smooth-gradient") {
        std::vector<double> phx(channels), phy(channels);
        for (std::size_t c = 0; c < channels; ++c) {
            phx[c] = tau * rng.uniform();
            phy[c] = tau * rng.uniform();
        }
        for (std::size_t l = 0; l < frames; ++l)
            for (std::size_t y = 0; y < height; ++y)
                for (std::size_t x = 0; x < width; ++x)
                    for (std::size_t c = 0; c < channels; ++c) {
                        const double drift = 0.05 * double(l);
                        v(l, y, x, c) = float(0.5 + 0.2 * std::cos(tau * double(x) / W + phx[c] + drift) +
                                              0.2 * std::cos(tau * double(y) / H + phy[c]));
                    }
        return v;
    }
    if (pattern == "two-scene") {
        std::vector<double> texture(width * height * channels);
        for (auto& t : texture)
            t = 0.08 * (rng.uniform() - 0.5);
        const double ph = tau * rng.uniform();
        const std::size_t switch_at = frames / 2;
        // Brightness steps between consecutive frames follow a nested rhythm:
        // 1 unit inside pairs, 2 between pairs, 4 between fours, and so on.
        double drift = 0.0;
        for (std::size_t l = 0; l < frames; ++l) {
            const bool second = l >= switch_at;
            if (l > 0)
                drift += 0.001 * double(std::size_t{1} << std::countr_zero(l));
            for (std::size_t y = 0; y < height; ++y)
                for (std::size_t x = 0; x < width; ++x)
                    for (std::size_t c = 0; c < channels; ++c) {
                        double val;
                        if (!second)
                            val = 0.3 + 0.1 * std::cos(tau * double(x) / W + ph);
                        else
                            val = 0.6 + 0.1 * std::cos(tau * double(y) / H + ph) +
                                  texture[(y * width + x) * channels + c];
                        v(l, y, x, c) = float(val + drift);
                    }
        }
        return v;
    }
    throw Error(ErrorCode::invalid_argument, "unknown pattern '" + std::string(pattern) + "'");
}

/// `count` steps of the given stride counting down from T - 1.
inline std::vector<int> default_steps(int max_step = 1000, int count = 50, int stride = 20)
{
    require(max_step >= 2 && count >= 1 && stride >= 1 && (count - 1) * stride <= max_step - 1,
            ErrorCode::invalid_argument, "step list does not fit in [0, T-1]");
    std::vector<int> steps;
    for (int k = 0; k < count; ++k)
        steps.push_back(max_step - 1 - k * stride);
    return steps;
}

struct TrajectorySpec {
    std::string pattern = "moving-edge";
    std::size_t frames = 48;
    std::size_t width = 64;
    std::size_t height = 64;
    std::size_t channels = 4;
    std::vector<int> steps = default_steps();
    int max_step = 1000;
    double r_min = 2.0;
    double r_max = 30.0;
    double exponent = 1.0;   // p
    double eta_max = 5e-5;
    double eta_decay = 2.0;
    std::uint64_t seed = 0;

    double planted_radius(int t) const noexcept
    {
        const double s = 1.0 - double(t) / double(max_step);
        return r_min + (r_max - r_min) * std::pow(s, exponent);
    }
    double noise_level(int t) const noexcept
    {
        return eta_max * std::pow(double(t) / double(max_step), eta_decay);
    }

    void validate() const
    {
        require(frames >= 1 && width >= 1 && height >= 1 && channels >= 1,
                ErrorCode::invalid_argument, "trajectory dims must be >= 1");
        require(!steps.empty(), ErrorCode::invalid_argument, "empty step list");
        for (std::size_t i = 0; i < steps.size(); ++i) {
            require(steps[i] >= 0 && steps[i] <= max_step - 1, ErrorCode::invalid_argument,
                    "step " + std::to_string(steps[i]) + " outside [0, T-1]");
            require(i == 0 || steps[i] < steps[i - 1], ErrorCode::invalid_argument,
                    "steps must be strictly descending");
        }
        require(r_min > 0.0 && r_min < r_max && r_max <= max_radius(width, height),
                ErrorCode::invalid_argument, "need 0 < r_min < r_max <= max radius");
        require(exponent > 0.0, ErrorCode::invalid_argument, "exponent must be > 0");
        require(eta_max >= 0.0 && eta_decay >= 0.0, ErrorCode::invalid_argument,
                "noise parameters must be >= 0");
    }
};

struct TrajectoryStep {
    int t = 0;
    double planted_radius = 0.0;
    double noise_level = 0.0;
    LatentSequence z;
};

struct Trajectory {
    LatentSequence clean;
    std::vector<TrajectoryStep> steps;
};

/// Hard circular low-pass: keeps bins with d <= radius.
inline void hard_lowpass(Spectrum& s, double radius)
{
    for (std::size_t v = 0; v < s.height(); ++v)
        for (std::size_t u = 0; u < s.width(); ++u) {
            if (std::hypot(double(s.freq_x(u)), double(s.freq_y(v))) <= radius)
                continue;
            for (std::size_t l = 0; l < s.frames(); ++l)
                for (std::size_t c = 0; c < s.channels(); ++c)
                    s.at(l, v, u, c) = cplx{};
        }
}

inline std::uint64_t step_seed(std::uint64_t seed, int t) noexcept
{
    return splitmix64(seed) ^ splitmix64(0x7a11ull + std::uint64_t(t));
}

/// Largest bin distance from DC on a W x H grid.
inline double grid_extent(std::size_t width, std::size_t height) noexcept
{
    return std::hypot(double(width / 2), double(height / 2));
}

inline TrajectoryStep synth_step(const TrajectorySpec& spec, const LatentSequence& clean,
                                 const Spectrum& clean_spectrum, int t)
{
    TrajectoryStep step;
    step.t = t;
    step.planted_radius = spec.planted_radius(t);
    step.noise_level = spec.noise_level(t);
    // A cutoff covering every bin passes x0 through untouched (no round-off).
    Sequence<double> low = Sequence<double>::convert(clean);
    if (step.planted_radius < grid_extent(clean.width(), clean.height())) {
        Spectrum s = clean_spectrum;
        hard_lowpass(s, step.planted_radius);
        low = inverse_spectrum<double>(s);
    }
    GaussianStream noise(step_seed(spec.seed, t));
    auto data = low.data();
    step.z = LatentSequence(low.dims());
    auto out = step.z.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double n = step.noise_level > 0.0 ? noise.next() : 0.0;
        out[i] = static_cast<float>(data[i] + step.noise_level * n);
    }
    return step;
}

inline Trajectory synth_trajectory(const TrajectorySpec& spec)
{
    spec.validate();
    Trajectory traj;
    traj.clean = make_test_video(spec.pattern, spec.frames, spec.width, spec.height, spec.channels,
                                 spec.seed);
    const Spectrum clean = forward_spectrum(traj.clean);
    traj.steps.reserve(spec.steps.size());
    for (int t : spec.steps)
        traj.steps.push_back(synth_step(spec, traj.clean, clean, t));
    return traj;
}

} // namespace frag
