// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>

#include "frag/apf.hpp"
#include "frag/grouping.hpp"
#include "frag/spectral.hpp"
#include "frag/tensor.hpp"

namespace frag {

/// Everything decided for one denoising step.
struct StepRecord {
    int t = 0;
    double radius = 0.0;
    std::optional<MomentPoint> moment;  // empty when the radius fell back to d0
    std::size_t n_cut = 0;
    TemporalGroups groups;
};

/// One step from precomputed spectra. `previous` is the spectrum of the step
/// before (larger t); without it, or when the differential has no
/// positive-quadrant content, the radius falls back to d0.
template <class T>
StepRecord frag_step(const Sequence<T>& z, const Spectrum& current, const Spectrum* previous,
                     int t, const SchedulerConfig& cfg)
{
    require(z.frames() >= 2, ErrorCode::invalid_argument, "a step needs at least 2 frames");
    require(cfg.min_group >= 1 && cfg.min_group <= z.frames(), ErrorCode::invalid_argument,
            "min_group must lie in [1, L]");
    StepRecord rec;
    rec.t = t;
    if (previous) {
        try {
            rec.moment = spatial_moments(differential_spectrum(current, *previous));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::degenerate_input)
                throw;
        }
    }
    const MomentPoint m = rec.moment.value_or(MomentPoint{});
    rec.radius = adapted_radius(m, cfg.d0, z.width(), z.height());

    const ApfFilter filter(rec.radius, cfg.sigma, z.width(), z.height());
    const auto refined = apply_filter<double>(filter, current);
    const MergeTree tree = build_merge_tree(refined, cfg.contiguous);
    rec.n_cut = schedule_cut_rank(t, cfg, z.frames());
    rec.n_cut = std::min(rec.n_cut, tree.root_rank());
    rec.groups = cut_tree(tree, rec.n_cut, cfg.min_group);
    return rec;
}

/// Convenience form that transforms z_t (and z_prev, when given) itself.
template <class T>
StepRecord frag_step(const Sequence<T>& z, const Sequence<T>* z_prev, int t,
                     const SchedulerConfig& cfg)
{
    const Spectrum current = forward_spectrum(z);
    if (!z_prev)
        return frag_step(z, current, nullptr, t, cfg);
    require_same_dims(z, *z_prev, "frag_step");
    const Spectrum previous = forward_spectrum(*z_prev);
    return frag_step(z, current, &previous, t, cfg);
}

/// Feeds a trajectory step by step (descending t), keeping the previous
/// step's spectrum so each latent is transformed once.
class StepRunner {
public:
    explicit StepRunner(SchedulerConfig cfg) : cfg_(cfg) {}

    template <class T>
    StepRecord push(const Sequence<T>& z, int t)
    {
        require(!last_t_ || t < *last_t_, ErrorCode::invalid_argument,
                "steps must be pushed in strictly descending t");
        if (prev_)
            require(prev_->dims() == z.dims(), ErrorCode::dimension_mismatch,
                    "step tensors must share dims");
        Spectrum current = forward_spectrum(z);
        StepRecord rec = frag_step(z, current, prev_ ? &*prev_ : nullptr, t, cfg_);
        prev_ = std::move(current);
        last_t_ = t;
        return rec;
    }

    const SchedulerConfig& config() const noexcept { return cfg_; }

private:
    SchedulerConfig cfg_;
    std::optional<Spectrum> prev_;
    std::optional<int> last_t_;
};

} // namespace frag
