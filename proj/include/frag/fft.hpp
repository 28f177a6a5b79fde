// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// One-dimensional complex DFT of arbitrary length: iterative radix-2 for
// powers of two, Bluestein's chirp-z for everything else.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "frag/error.hpp"

namespace frag {

using cplx = std::complex<double>;

/// |z| without the overflow-guarded hypot path of std::abs.
inline double magnitude(const cplx& z) noexcept
{
    return std::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

namespace detail {

inline bool is_pow2(std::size_t n) noexcept { return n && !(n & (n - 1)); }

class Radix2 {
public:
    explicit Radix2(std::size_t n) : n_(n), bitrev_(n), twiddle_(n / 2)
    {
        unsigned bits = 0;
        while ((std::size_t{1} << bits) < n)
            ++bits;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (unsigned b = 0; b < bits; ++b)
                r |= ((i >> b) & 1u) << (bits - 1 - b);
            bitrev_[i] = r;
        }
        // Direct evaluation per index keeps twiddles accurate to the last ulp.
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double a = -2.0 * std::numbers::pi * double(k) / double(n);
            twiddle_[k] = cplx(std::cos(a), std::sin(a));
        }
    }

    /// In-place forward transform (e^{-i...} kernel), or inverse kernel
    /// without the 1/n scale when `inverse` is set.
    void run(std::span<cplx> x, bool inverse) const noexcept
    {
        for (std::size_t i = 0; i < n_; ++i)
            if (i < bitrev_[i])
                std::swap(x[i], x[bitrev_[i]]);
        // Plain real arithmetic: std::complex operator* carries NaN recovery
        // that dominates the butterfly cost.
        auto* d = reinterpret_cast<double*>(x.data());
        const double sign = inverse ? -1.0 : 1.0;
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t step = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t k = 0; k < half; ++k) {
                    const double wr = twiddle_[k * step].real();
                    const double wi = sign * twiddle_[k * step].imag();
                    double* a = d + 2 * (start + k);
                    double* b = d + 2 * (start + k + half);
                    const double vr = b[0] * wr - b[1] * wi;
                    const double vi = b[0] * wi + b[1] * wr;
                    b[0] = a[0] - vr;
                    b[1] = a[1] - vi;
                    a[0] += vr;
                    a[1] += vi;
                }
            }
        }
    }

    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<cplx> twiddle_;
};

} // namespace detail

/// Reusable plan for length-n transforms. Immutable after construction, so one
/// plan may serve several threads.
class FftPlan {
public:
    explicit FftPlan(std::size_t n) : n_(n)
    {
        require(n >= 1, ErrorCode::invalid_argument, "FFT length must be >= 1");
        if (detail::is_pow2(n)) {
            pow2_ = std::make_unique<detail::Radix2>(n);
            return;
        }
        std::size_t m = 1;
        while (m < 2 * n - 1)
            m <<= 1;
        pow2_ = std::make_unique<detail::Radix2>(m);
        chirp_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2n avoids precision loss in the angle for large k.
            const std::size_t k2 = (k * k) % (2 * n);
            const double a = std::numbers::pi * double(k2) / double(n);
            chirp_[k] = cplx(std::cos(a), -std::sin(a));
        }
        kernel_fwd_.assign(m, cplx{});
        kernel_fwd_[0] = std::conj(chirp_[0]);
        for (std::size_t k = 1; k < n; ++k)
            kernel_fwd_[k] = kernel_fwd_[m - k] = std::conj(chirp_[k]);
        pow2_->run(kernel_fwd_, false);
    }

    std::size_t size() const noexcept { return n_; }

    /// Unnormalized forward DFT: X[k] = sum_j x[j] e^{-2 pi i jk/n}.
    void forward(std::span<cplx> x) const { transform(x, false); }

    /// Inverse DFT including the 1/n scale.
    void inverse(std::span<cplx> x) const
    {
        transform(x, true);
        const double s = 1.0 / double(n_);
        for (auto& v : x)
            v *= s;
    }

private:
    void transform(std::span<cplx> x, bool inverse) const
    {
        if (!chirp_.size()) {
            pow2_->run(x, inverse);
            return;
        }
        // The inverse is the conjugate of the forward transform of the conjugate.
        const std::size_t m = pow2_->size();
        std::vector<cplx> a(m, cplx{});
        for (std::size_t k = 0; k < n_; ++k)
            a[k] = (inverse ? std::conj(x[k]) : x[k]) * chirp_[k];
        pow2_->run(a, false);
        for (std::size_t k = 0; k < m; ++k)
            a[k] *= kernel_fwd_[k];
        pow2_->run(a, true);
        const double s = 1.0 / double(m);
        for (std::size_t k = 0; k < n_; ++k) {
            const cplx v = a[k] * s * chirp_[k];
            x[k] = inverse ? std::conj(v) : v;
        }
    }

    std::size_t n_;
    std::unique_ptr<detail::Radix2> pow2_;
    std::vector<cplx> chirp_;
    std::vector<cplx> kernel_fwd_;
};

} // namespace frag
