#pragma once

#include "errors.hpp"
#include "model.hpp"

#include <string>

namespace virtimu {

/// Motion clip JSON, the hand-off format from external text-to-motion
/// models: {format_version, frame_rate_hz, joint_names, frames: T x J x 3
/// meters, activity?, prompt?, subject?}. joint_names must match the
/// configured skeleton exactly; write/read round-trips are numerically
/// lossless.
MotionSequence read_motion_file(const std::string& path, const Skeleton& skeleton);
void write_motion_file(const MotionSequence& motion, const Skeleton& skeleton,
                       const std::string& path);

}  // namespace virtimu
