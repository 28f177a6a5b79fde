// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// Frame distances, min-linkage agglomerative clustering over frames, the
// logarithmic cut-rank scheduler and cutting the merge tree into temporal
// groups.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "frag/error.hpp"
#include "frag/tensor.hpp"

namespace frag {

struct SchedulerConfig {
    int max_step = 1000;          // T
    std::size_t min_group = 2;    // smallest group size after post-merge
    double d0 = 6.0;              // radius margin, grid cells
    double sigma = 0.25;          // APF skirt scale, grid cells
    bool contiguous = true;       // only temporally adjacent clusters may merge
    std::size_t n_root = 0;       // 0: use L - 1
};

// ---------------------------------------------------------------------------
// Frame distance

/// Spatial mean of each channel of one frame (W*H*C values, channel fastest).
template <class T>
std::vector<double> pooled_frame(std::span<const T> frame, std::size_t channels)
{
    require(channels > 0 && frame.size() % channels == 0, ErrorCode::invalid_argument,
            "frame size is not a multiple of the channel count");
    std::vector<double> mean(channels, 0.0);
    const std::size_t pixels = frame.size() / channels;
    for (std::size_t p = 0; p < pixels; ++p)
        for (std::size_t c = 0; c < channels; ++c)
            mean[c] += static_cast<double>(frame[p * channels + c]);
    for (auto& m : mean)
        m /= double(pixels);
    return mean;
}

inline double euclidean(std::span<const double> a, std::span<const double> b) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

/// Euclidean distance between the spatially mean-pooled channel vectors of
/// two frames.
template <class T>
double frame_distance(std::span<const T> a, std::span<const T> b, std::size_t channels)
{
    require(a.size() == b.size(), ErrorCode::dimension_mismatch, "frame_distance: size mismatch");
    const auto pa = pooled_frame(a, channels);
    const auto pb = pooled_frame(b, channels);
    return euclidean(pa, pb);
}

/// L x L matrix of pooled frame distances, row-major.
template <class T>
std::vector<double> distance_matrix(const Sequence<T>& h)
{
    const std::size_t L = h.frames();
    std::vector<std::vector<double>> pooled(L);
    for (std::size_t l = 0; l < L; ++l)
        pooled[l] = pooled_frame(h.frame(l), h.channels());
    std::vector<double> d(L * L, 0.0);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i + 1; j < L; ++j)
            d[i * L + j] = d[j * L + i] = euclidean(pooled[i], pooled[j]);
    return d;
}

// ---------------------------------------------------------------------------
// Merge tree

struct Merge {
    std::size_t rank = 0;              // 1-based merge order
    std::size_t left = 0;              // cluster ids: 0..L-1 leaves, L+k merge k
    std::size_t right = 0;
    std::vector<std::size_t> members;  // sorted frame indices of the merged cluster
    double linkage = 0.0;              // min-linkage distance at merge time
    double height = 0.0;               // running max of linkage (monotone in rank)
};

class MergeTree {
public:
    MergeTree(std::size_t leaves, std::vector<double> distances, bool contiguous,
              std::vector<Merge> merges)
        : leaves_(leaves), distances_(std::move(distances)), contiguous_(contiguous),
          merges_(std::move(merges)) {}

    std::size_t leaves() const noexcept { return leaves_; }
    std::size_t root_rank() const noexcept { return leaves_ - 1; }
    bool contiguous() const noexcept { return contiguous_; }
    const std::vector<Merge>& merges() const noexcept { return merges_; }
    double distance(std::size_t i, std::size_t j) const noexcept
    {
        return distances_[i * leaves_ + j];
    }
    std::span<const double> distances() const noexcept { return distances_; }

    /// Frame indices of cluster `id`.
    std::vector<std::size_t> members(std::size_t id) const
    {
        if (id < leaves_)
            return {id};
        return merges_.at(id - leaves_).members;
    }

private:
    std::size_t leaves_;
    std::vector<double> distances_;
    bool contiguous_;
    std::vector<Merge> merges_;
};

/// Agglomerative clustering with min linkage over a precomputed L x L
/// distance matrix. With `contiguous` set only neighbouring index intervals
/// may merge. Equal linkages resolve to the pair whose left cluster starts at
/// the smaller frame index (then the smaller right start).
inline MergeTree build_merge_tree(std::vector<double> distances, std::size_t L, bool contiguous)
{
    require(L >= 2, ErrorCode::invalid_argument, "merge tree needs at least 2 frames");
    require(distances.size() == L * L, ErrorCode::dimension_mismatch,
            "distance matrix must be L x L");

    struct Cluster {
        std::size_t id;
        std::size_t first;
        std::vector<std::size_t> members;
    };
    // Active clusters in ascending order of first member.
    std::vector<Cluster> active;
    active.reserve(L);
    for (std::size_t i = 0; i < L; ++i)
        active.push_back({i, i, {i}});
    // linkage[a * L + b] for active slot ids a, b (leaf index of the slot's origin).
    std::vector<double> link = distances;
    std::vector<std::size_t> slot(L);  // active position -> row in `link`
    std::iota(slot.begin(), slot.end(), 0);

    std::vector<Merge> merges;
    merges.reserve(L - 1);
    double height = 0.0;
    for (std::size_t rank = 1; rank < L; ++rank) {
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        const std::size_t n = active.size();
        for (std::size_t a = 0; a + 1 < n; ++a) {
            const std::size_t b_end = contiguous ? a + 2 : n;
            for (std::size_t b = a + 1; b < b_end; ++b) {
                const double d = link[slot[a] * L + slot[b]];
                if (d < best) {
                    best = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }

        Cluster& A = active[best_a];
        Cluster& B = active[best_b];
        Merge m;
        m.rank = rank;
        m.left = A.id;
        m.right = B.id;
        m.members = A.members;
        m.members.insert(m.members.end(), B.members.begin(), B.members.end());
        std::sort(m.members.begin(), m.members.end());
        m.linkage = best;
        height = std::max(height, best);
        m.height = height;

        // Lance-Williams update for single linkage: the merged row keeps A's slot.
        const std::size_t ra = slot[best_a], rb = slot[best_b];
        for (std::size_t k = 0; k < n; ++k) {
            if (k == best_a || k == best_b)
                continue;
            const std::size_t rk = slot[k];
            const double d = std::min(link[ra * L + rk], link[rb * L + rk]);
            link[ra * L + rk] = link[rk * L + ra] = d;
        }
        A.id = L + merges.size();
        A.members = m.members;
        merges.push_back(std::move(m));
        active.erase(active.begin() + std::ptrdiff_t(best_b));
        slot.erase(slot.begin() + std::ptrdiff_t(best_b));
    }
    return MergeTree(L, std::move(distances), contiguous, std::move(merges));
}

template <class T>
MergeTree build_merge_tree(const Sequence<T>& h, bool contiguous = true)
{
    require(h.frames() >= 2, ErrorCode::invalid_argument, "merge tree needs at least 2 frames");
    return build_merge_tree(distance_matrix(h), h.frames(), contiguous);
}

// ---------------------------------------------------------------------------
// Scheduler

/// n_cut = ceil(n_root * (1 - log(T - t) / log(T - 1))), clamped to [1, n_root].
/// Reaches n_root at t = T - 1 and falls towards 1 as t approaches 0.
inline std::size_t schedule_cut_rank(int t, int max_step, std::size_t n_root)
{
    require(max_step >= 2, ErrorCode::invalid_argument, "T must be >= 2");
    require(t >= 0 && t <= max_step - 1, ErrorCode::invalid_argument,
            "step t=" + std::to_string(t) + " outside [0, " + std::to_string(max_step - 1) + "]");
    require(n_root >= 1, ErrorCode::invalid_argument, "n_root must be >= 1");
    const double frac = 1.0 - std::log(double(max_step - t)) / std::log(double(max_step - 1));
    const double raw = std::ceil(double(n_root) * frac);
    if (raw < 1.0)
        return 1;
    return std::min(n_root, static_cast<std::size_t>(raw));
}

inline std::size_t schedule_cut_rank(int t, const SchedulerConfig& cfg, std::size_t frames)
{
    return schedule_cut_rank(t, cfg.max_step, cfg.n_root ? cfg.n_root : frames - 1);
}

// ---------------------------------------------------------------------------
// Cutting

/// Disjoint cover of the frames, ordered by each group's first frame.
struct TemporalGroups {
    std::vector<std::vector<std::size_t>> groups;

    std::size_t size() const noexcept { return groups.size(); }

    bool contiguous() const noexcept
    {
        for (const auto& g : groups)
            if (g.empty() || g.back() - g.front() + 1 != g.size())
                return false;
        return true;
    }

    friend bool operator==(const TemporalGroups&, const TemporalGroups&) = default;
};

/// Checks disjointness, coverage of [0, L), sorted members and group order.
inline bool is_partition(const TemporalGroups& g, std::size_t L)
{
    std::vector<char> seen(L, 0);
    std::size_t prev_first = 0;
    for (std::size_t k = 0; k < g.groups.size(); ++k) {
        const auto& grp = g.groups[k];
        if (grp.empty() || !std::is_sorted(grp.begin(), grp.end()))
            return false;
        if (k > 0 && grp.front() <= prev_first)
            return false;
        prev_first = grp.front();
        for (std::size_t f : grp) {
            if (f >= L || seen[f])
                return false;
            seen[f] = 1;
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
}

namespace detail {

inline double group_linkage(const MergeTree& tree, const std::vector<std::size_t>& a,
                            const std::vector<std::size_t>& b)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : a)
        for (std::size_t j : b)
            best = std::min(best, tree.distance(i, j));
    return best;
}

inline void sort_groups(std::vector<std::vector<std::size_t>>& groups)
{
    for (auto& g : groups)
        std::sort(g.begin(), g.end());
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

} // namespace detail

/// Applies every merge of rank < n_cut; the surviving clusters are the groups
/// (L - n_cut + 1 of them). Afterwards the leftmost group smaller than
/// min_group is repeatedly folded into the neighbour with the smaller
/// min-linkage to it (ties go left) until every group is large enough. For
/// contiguous trees the neighbours are the adjacent intervals, otherwise any
/// other group.
inline TemporalGroups cut_tree(const MergeTree& tree, std::size_t n_cut, std::size_t min_group)
{
    const std::size_t L = tree.leaves();
    require(n_cut >= 1 && n_cut <= tree.root_rank(), ErrorCode::invalid_argument,
            "n_cut=" + std::to_string(n_cut) + " outside [1, " +
                std::to_string(tree.root_rank()) + "]");
    require(min_group >= 1 && min_group <= L, ErrorCode::invalid_argument,
            "min_group must lie in [1, L]");

    std::vector<std::size_t> parent(L);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Merge& m : tree.merges()) {
        if (m.rank >= n_cut)
            break;
        for (std::size_t f : m.members)
            parent[find(f)] = find(m.members.front());
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot_of(L, L);
    for (std::size_t f = 0; f < L; ++f) {
        const std::size_t root = find(f);
        if (slot_of[root] == L) {
            slot_of[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot_of[root]].push_back(f);
    }
    detail::sort_groups(groups);

    while (groups.size() > 1) {
        auto small = std::find_if(groups.begin(), groups.end(),
                                  [&](const auto& g) { return g.size() < min_group; });
        if (small == groups.end())
            break;
        const std::size_t k = std::size_t(small - groups.begin());
        std::size_t target = k;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < groups.size(); ++j) {
            if (j == k)
                continue;
            if (tree.contiguous() && j + 1 != k && j != k + 1)
                continue;
            // Candidates are visited left to right, so strict < keeps ties on the left.
            const double d = detail::group_linkage(tree, groups[k], groups[j]);
            if (d < best || target == k) {
                best = d;
                target = j;
            }
        }
        groups[target].insert(groups[target].end(), groups[k].begin(), groups[k].end());
        groups.erase(groups.begin() + std::ptrdiff_t(k));
        detail::sort_groups(groups);
    }
    return TemporalGroups{std::move(groups)};
}

} // namespace frag
