// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// Group-restricted enhancement: an operator sees only the frames of one
// temporal group at a time.

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "frag/error.hpp"
#include "frag/grouping.hpp"
#include "frag/tensor.hpp"

namespace frag {

/// Maps a stacked group (g frames) to a tensor of the same shape.
using GroupwiseOperator = std::function<LatentSequence(const LatentSequence&)>;

inline LatentSequence gather_frames(const LatentSequence& z, const std::vector<std::size_t>& idx)
{
    Dims d = z.dims();
    d.frames = idx.size();
    LatentSequence out(d);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        auto src = z.frame(idx[k]);
        std::copy(src.begin(), src.end(), out.frame(k).begin());
    }
    return out;
}

/// Runs `op` on every group independently and writes each result back to the
/// group's own frame positions.
inline LatentSequence apply_groupwise(const GroupwiseOperator& op, const TemporalGroups& groups,
                                      const LatentSequence& z)
{
    require(is_partition(groups, z.frames()), ErrorCode::invalid_argument,
            "groups do not partition the sequence's frames");
    LatentSequence out = z;
    for (const auto& g : groups.groups) {
        const LatentSequence result = op(gather_frames(z, g));
        Dims expect = z.dims();
        expect.frames = g.size();
        require(result.dims() == expect, ErrorCode::dimension_mismatch,
                "groupwise operator changed the group's shape");
        for (std::size_t k = 0; k < g.size(); ++k) {
            auto src = result.frame(k);
            std::copy(src.begin(), src.end(), out.frame(g[k]).begin());
        }
    }
    return out;
}

/// Replaces every frame of the group with the group mean.
inline LatentSequence group_mean(const LatentSequence& group)
{
    const std::size_t n = group.frame_size();
    std::vector<double> mean(n, 0.0);
    for (std::size_t l = 0; l < group.frames(); ++l) {
        auto f = group.frame(l);
        for (std::size_t i = 0; i < n; ++i)
            mean[i] += f[i];
    }
    LatentSequence out(group.dims());
    for (std::size_t l = 0; l < group.frames(); ++l) {
        auto f = out.frame(l);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = static_cast<float>(mean[i] / double(group.frames()));
    }
    return out;
}

/// Index of the frame with the smallest total pooled distance to the rest of
/// the group; ties go to the earlier frame.
inline std::size_t medoid_frame(const LatentSequence& group)
{
    require(group.frames() >= 1, ErrorCode::invalid_argument, "empty group");
    const auto d = distance_matrix(group);
    const std::size_t g = group.frames();
    std::size_t best = 0;
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < g; ++j)
            total += d[i * g + j];
        if (total < best_total) {
            best_total = total;
            best = i;
        }
    }
    return best;
}

/// Blends every frame towards the group's medoid: f <- (1 - beta) f + beta pivot.
inline LatentSequence pivot_propagate(const LatentSequence& group, double beta)
{
    require(beta >= 0.0 && beta <= 1.0, ErrorCode::invalid_argument, "beta must lie in [0, 1]");
    const std::size_t pivot = medoid_frame(group);
    LatentSequence out = group;
    auto p = group.frame(pivot);
    for (std::size_t l = 0; l < group.frames(); ++l) {
        auto f = out.frame(l);
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = static_cast<float>((1.0 - beta) * double(f[i]) + beta * double(p[i]));
    }
    return out;
}

inline GroupwiseOperator pivot_operator(double beta)
{
    require(beta >= 0.0 && beta <= 1.0, ErrorCode::invalid_argument, "beta must lie in [0, 1]");
    return [beta](const LatentSequence& g) { return pivot_propagate(g, beta); };
}

/// Fixed windows [0, w), [w, 2w), ...; the last one may be shorter.
inline TemporalGroups sliding_window_groups(std::size_t frames, std::size_t window)
{
    require(window >= 1 && window <= frames, ErrorCode::invalid_argument,
            "window must lie in [1, L]");
    TemporalGroups out;
    for (std::size_t start = 0; start < frames; start += window) {
        std::vector<std::size_t> g;
        for (std::size_t f = start; f < std::min(frames, start + window); ++f)
            g.push_back(f);
        out.groups.push_back(std::move(g));
    }
    return out;
}

} // namespace frag
