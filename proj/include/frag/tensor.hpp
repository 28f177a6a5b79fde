// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "frag/error.hpp"

namespace frag {

/// Shape of a frames x width x height x channels tensor.
struct Dims {
    std::size_t frames = 0;
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 0;

    std::size_t frame_size() const noexcept { return width * height * channels; }
    std::size_t size() const noexcept { return frames * frame_size(); }
    bool valid() const noexcept { return frames && width && height && channels; }

    friend bool operator==(const Dims&, const Dims&) = default;
};

inline std::string to_string(const Dims& d)
{
    return std::to_string(d.frames) + "x" + std::to_string(d.width) + "x" +
           std::to_string(d.height) + "x" + std::to_string(d.channels);
}

/// Dense 4-D tensor. Element (l, y, x, c) lives at ((l*H + y)*W + x)*C + c,
/// the same order the tensor file format uses.
template <class T>
class Sequence {
public:
    using value_type = T;

    Sequence() = default;

    explicit Sequence(Dims dims, T fill = T{}) : dims_(dims)
    {
        require(dims.valid(), ErrorCode::invalid_argument,
                "tensor dims must all be >= 1, got " + to_string(dims));
        data_.assign(dims.size(), fill);
    }

    Sequence(std::size_t frames, std::size_t width, std::size_t height, std::size_t channels,
             T fill = T{})
        : Sequence(Dims{frames, width, height, channels}, fill) {}

    Sequence(Dims dims, std::vector<T> data) : dims_(dims), data_(std::move(data))
    {
        require(dims.valid(), ErrorCode::invalid_argument,
                "tensor dims must all be >= 1, got " + to_string(dims));
        require(data_.size() == dims.size(), ErrorCode::dimension_mismatch,
                "payload size does not match dims " + to_string(dims));
    }

    template <class U>
    static Sequence convert(const Sequence<U>& other)
    {
        std::vector<T> data(other.data().begin(), other.data().end());
        return Sequence(other.dims(), std::move(data));
    }

    const Dims& dims() const noexcept { return dims_; }
    std::size_t frames() const noexcept { return dims_.frames; }
    std::size_t width() const noexcept { return dims_.width; }
    std::size_t height() const noexcept { return dims_.height; }
    std::size_t channels() const noexcept { return dims_.channels; }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t frame_size() const noexcept { return dims_.frame_size(); }

    std::size_t offset(std::size_t l, std::size_t y, std::size_t x, std::size_t c) const noexcept
    {
        return ((l * dims_.height + y) * dims_.width + x) * dims_.channels + c;
    }

    T& operator()(std::size_t l, std::size_t y, std::size_t x, std::size_t c) noexcept
    {
        return data_[offset(l, y, x, c)];
    }
    const T& operator()(std::size_t l, std::size_t y, std::size_t x, std::size_t c) const noexcept
    {
        return data_[offset(l, y, x, c)];
    }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    std::span<T> frame(std::size_t l) noexcept
    {
        return std::span<T>(data_).subspan(l * dims_.frame_size(), dims_.frame_size());
    }
    std::span<const T> frame(std::size_t l) const noexcept
    {
        return std::span<const T>(data_).subspan(l * dims_.frame_size(), dims_.frame_size());
    }

    bool all_finite() const noexcept
    {
        for (const T& v : data_)
            if (!std::isfinite(static_cast<double>(v)))
                return false;
        return true;
    }

    friend bool operator==(const Sequence&, const Sequence&) = default;

private:
    Dims dims_{};
    std::vector<T> data_;
};

/// The on-disk precision. Spectral work is done in double and converted back.
using LatentSequence = Sequence<float>;

/// Binary per-pixel mask over a W x H frame; 1 keeps a pixel, 0 drops it.
class FrameMask {
public:
    FrameMask() = default;

    FrameMask(std::size_t width, std::size_t height, bool fill = true)
        : width_(width), height_(height), data_(width * height, fill ? 1 : 0)
    {
        require(width > 0 && height > 0, ErrorCode::invalid_argument, "mask dims must be >= 1");
    }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }

    bool operator()(std::size_t y, std::size_t x) const noexcept { return data_[y * width_ + x] != 0; }
    void set(std::size_t y, std::size_t x, bool v) noexcept { data_[y * width_ + x] = v ? 1 : 0; }

    std::size_t count() const noexcept
    {
        std::size_t n = 0;
        for (auto v : data_)
            n += v;
        return n;
    }

    /// Zero out the half-open rectangle [x0, x1) x [y0, y1), clipped to the frame.
    void zero_rect(std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) noexcept
    {
        for (std::size_t y = y0; y < std::min(y1, height_); ++y)
            for (std::size_t x = x0; x < std::min(x1, width_); ++x)
                set(y, x, false);
    }

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<unsigned char> data_;
};

template <class A, class B>
void require_same_dims(const Sequence<A>& a, const Sequence<B>& b, const char* what)
{
    require(a.dims() == b.dims(), ErrorCode::dimension_mismatch,
            std::string(what) + ": dims " + to_string(a.dims()) + " vs " + to_string(b.dims()));
}

} // namespace frag
