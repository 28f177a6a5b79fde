// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// Simulates a short trajectory and prints the radius and groups chosen at
// each step, then smooths one step's latents within its groups.

#include <cstdio>

#include "frag/frag.hpp"

int main()
{
    frag::TrajectorySpec spec;
    spec.pattern = "two-scene";
    spec.frames = 16;
    spec.width = 32;
    spec.height = 32;
    spec.channels = 2;
    spec.r_max = 15.0;
    spec.steps = frag::default_steps(1000, 10, 100);

    const frag::Trajectory traj = frag::synth_trajectory(spec);
    frag::StepRunner runner(frag::SchedulerConfig{});

    for (const auto& step : traj.steps) {
        const frag::StepRecord rec = runner.push(step.z, step.t);
        std::printf("t=%4d  r=%6.2f  n_cut=%2zu  groups:", rec.t, rec.radius, rec.n_cut);
        for (const auto& g : rec.groups.groups)
            std::printf(" [%zu-%zu]", g.front(), g.back());
        std::printf("\n");

        if (&step == &traj.steps.back()) {
            const auto smoothed = frag::apply_groupwise(frag::pivot_operator(0.5), rec.groups, step.z);
            std::printf("frame consistency: %.4f -> %.4f\n", frag::frame_consistency(step.z),
                        frag::frame_consistency(smoothed));
        }
    }
    return 0;
}
