// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// JSON export of per-step records: the hand-off format for diffusion editors
// that want to use the temporal groups as receptive fields.
//
//   {
//     "version": 1,
//     "config": { "max_step": 1000, "sigma": 0.25, "d0": 6.0, "min_group": 2,
//                 "contiguous": true, "frames": 48, "width": 64, "height": 64,
//                 "channels": 4, ... },
//     "group_format": "ranges",
//     "steps": [ { "t": 999, "radius": 6.0, "moment": null, "n_cut": 47,
//                  "groups": [[0, 23], [24, 47]] }, ... ]
//   }
//
// Groups are inclusive [first, last] frame ranges. Trees built without the
// contiguity constraint use "group_format": "members" and list frame indices.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "frag/grouping.hpp"
#include "frag/pipeline.hpp"
#include "frag/spectral.hpp"

namespace frag {

inline constexpr int schedule_version = 1;

inline nlohmann::json groups_to_json(const TemporalGroups& g, bool ranges)
{
    auto out = nlohmann::json::array();
    for (const auto& grp : g.groups) {
        if (ranges)
            out.push_back({grp.front(), grp.back()});
        else
            out.push_back(grp);
    }
    return out;
}

inline nlohmann::json step_to_json(const StepRecord& rec, bool ranges)
{
    nlohmann::json j;
    j["t"] = rec.t;
    j["radius"] = rec.radius;
    if (rec.moment)
        j["moment"] = {rec.moment->mx, rec.moment->my};
    else
        j["moment"] = nullptr;
    j["n_cut"] = rec.n_cut;
    j["groups"] = groups_to_json(rec.groups, ranges);
    return j;
}

/// Config echo: the scheduler settings plus whatever the caller adds.
inline nlohmann::json scheduler_config_json(const SchedulerConfig& cfg, const Dims& dims)
{
    return {{"max_step", cfg.max_step},   {"sigma", cfg.sigma},
            {"d0", cfg.d0},               {"min_group", cfg.min_group},
            {"contiguous", cfg.contiguous}, {"frames", dims.frames},
            {"width", dims.width},        {"height", dims.height},
            {"channels", dims.channels}};
}

inline nlohmann::json make_schedule(const nlohmann::json& config,
                                    const std::vector<StepRecord>& steps, bool contiguous)
{
    nlohmann::json doc;
    doc["version"] = schedule_version;
    doc["config"] = config;
    doc["group_format"] = contiguous ? "ranges" : "members";
    auto arr = nlohmann::json::array();
    for (const auto& s : steps)
        arr.push_back(step_to_json(s, contiguous));
    doc["steps"] = std::move(arr);
    return doc;
}

namespace detail {

template <class T>
bool get_number(const nlohmann::json& obj, const char* key, T& out)
{
    if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number())
        return false;
    out = obj[key].get<T>();
    return true;
}

} // namespace detail

/// Structural checks on a schedule document; returns one message per problem.
inline std::vector<std::string> validate_schedule(const nlohmann::json& doc)
{
    std::vector<std::string> errs;
    auto fail = [&](std::string m) { errs.push_back(std::move(m)); };

    if (!doc.is_object())
        return {"document is not a JSON object"};
    if (!doc.contains("version") || doc["version"] != schedule_version)
        fail("version must be 1");
    if (!doc.contains("config") || !doc["config"].is_object())
        return errs.push_back("missing config object"), errs;
    const auto& cfg = doc["config"];

    long long frames = 0, width = 0, height = 0, max_step = 0, min_group = 0;
    if (!detail::get_number(cfg, "frames", frames) || frames < 2)
        fail("config.frames must be an integer >= 2");
    if (!detail::get_number(cfg, "width", width) || width < 1)
        fail("config.width must be >= 1");
    if (!detail::get_number(cfg, "height", height) || height < 1)
        fail("config.height must be >= 1");
    if (!detail::get_number(cfg, "max_step", max_step) || max_step < 2)
        fail("config.max_step must be >= 2");
    if (!detail::get_number(cfg, "min_group", min_group) || min_group < 1 || min_group > frames)
        fail("config.min_group must lie in [1, frames]");
    if (!errs.empty())
        return errs;

    const std::string format = doc.value("group_format", "");
    if (format != "ranges" && format != "members")
        fail("group_format must be \"ranges\" or \"members\"");
    if (!doc.contains("steps") || !doc["steps"].is_array() || doc["steps"].empty())
        return errs.push_back("steps must be a non-empty array"), errs;

    const double rmax = max_radius(std::size_t(width), std::size_t(height));
    long long prev_t = max_step;
    for (std::size_t i = 0; i < doc["steps"].size(); ++i) {
        const auto& s = doc["steps"][i];
        const std::string at = "steps[" + std::to_string(i) + "]: ";
        long long t = 0, n_cut = 0;
        double radius = 0;
        if (!detail::get_number(s, "t", t) || t < 0 || t > max_step - 1) {
            fail(at + "t missing or outside [0, T-1]");
            continue;
        }
        if (t >= prev_t)
            fail(at + "t not strictly descending");
        prev_t = t;
        if (!detail::get_number(s, "radius", radius) || !(radius > 0.0 && radius < rmax))
            fail(at + "radius outside (0, max radius)");
        if (!detail::get_number(s, "n_cut", n_cut) || n_cut < 1 || n_cut > frames - 1)
            fail(at + "n_cut outside [1, frames-1]");
        if (!s.contains("moment") ||
            !(s["moment"].is_null() ||
              (s["moment"].is_array() && s["moment"].size() == 2 && s["moment"][0].is_number() &&
               s["moment"][1].is_number())))
            fail(at + "moment must be null or [M_x, M_y]");
        if (!s.contains("groups") || !s["groups"].is_array() || s["groups"].empty()) {
            fail(at + "groups must be a non-empty array");
            continue;
        }
        TemporalGroups g;
        bool shape_ok = true;
        for (const auto& grp : s["groups"]) {
            if (!grp.is_array() || grp.empty()) {
                shape_ok = false;
                break;
            }
            std::vector<std::size_t> members;
            if (format == "ranges") {
                if (grp.size() != 2 || !grp[0].is_number_unsigned() || !grp[1].is_number_unsigned() ||
                    grp[1].get<std::size_t>() < grp[0].get<std::size_t>()) {
                    shape_ok = false;
                    break;
                }
                for (std::size_t f = grp[0].get<std::size_t>(); f <= grp[1].get<std::size_t>(); ++f)
                    members.push_back(f);
            } else {
                for (const auto& f : grp) {
                    if (!f.is_number_unsigned()) {
                        shape_ok = false;
                        break;
                    }
                    members.push_back(f.get<std::size_t>());
                }
            }
            g.groups.push_back(std::move(members));
        }
        if (!shape_ok) {
            fail(at + "malformed group entry");
            continue;
        }
        if (!is_partition(g, std::size_t(frames)))
            fail(at + "groups are not an ordered disjoint cover of all frames");
        if (g.size() > 1)
            for (const auto& grp : g.groups)
                if (grp.size() < std::size_t(min_group)) {
                    fail(at + "group smaller than min_group");
                    break;
                }
    }
    return errs;
}

} // namespace frag
