// Simulates a loop, fuses noisy odometry with node detections and prints the
// drift of both estimates.
//
//   fuse_loop [seed]

#include <cstdio>
#include <cstdlib>

#include "topometric/topometric.hpp"

using namespace topometric;

int main(int argc, char** argv) {
    ScenarioParams params = short_loop_preset();
    if (argc > 1) {
        params.seed = std::strtoull(argv[1], nullptr, 10);
    }
    const Scenario sc = make_scenario(params);
    const Pose2 origin = sc.ground_truth.origin();

    const Trajectory dead_reckoned = integrate(origin, sc.motions);
    const Trajectory fused = fuse(sc.motions, sc.detections, sc.map, origin, FusionConfig{});

    const ErrorReport m = evaluate(dead_reckoned, sc.ground_truth);
    const ErrorReport t = evaluate(fused, sc.ground_truth);
    std::printf("%zu poses, %zu nodes, %zu detections\n", sc.ground_truth.size(), sc.map.size(),
                sc.detections.size());
    std::printf("%-12s %10s %14s %12s\n", "", "trans [%]", "rot [deg/m]", "end err [m]");
    std::printf("%-12s %10.3f %14.5f %12.3f\n", "odometry", m.avg_translation_pct, m.avg_rotation_deg_per_m,
                m.endpoint_error);
    std::printf("%-12s %10.3f %14.5f %12.3f\n", "topometric", t.avg_translation_pct, t.avg_rotation_deg_per_m,
                t.endpoint_error);
    return 0;
}
