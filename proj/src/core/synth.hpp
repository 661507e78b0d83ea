#pragma once

#include "errors.hpp"
#include "model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace virtimu {

/// Activities with a parametric motion generator.
const std::vector<std::string>& synthetic_activities();  // walking, running, jumping, sitting, standing, lying

/// Deterministic parametric motion clip on the 22-joint skeleton, built as a
/// PoseTrajectory and passed through forward kinematics, so bone lengths are
/// exact. The style seed perturbs amplitudes (x0.8..1.2), frequencies
/// (x0.85..1.15) and phases (full circle) so repeated calls give varied
/// clips of the same activity. duration_s must lie in [1, 60]; the frame
/// count is round(duration_s * fps). The activity label is set on the result.
MotionSequence generate_synthetic_motion(const Skeleton& skeleton, const std::string& activity,
                                         double duration_s, std::uint64_t style_seed,
                                         double fps = 20.0);

}  // namespace virtimu
