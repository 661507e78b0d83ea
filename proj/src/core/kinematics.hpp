#pragma once

#include "errors.hpp"
#include "model.hpp"

namespace virtimu {

/// Global joint positions from local rotations and root translation.
/// position(j) = position(parent) + rotate(global_orientation(parent), rest_offset(j));
/// the root sits at root_translation. Bone lengths of the output equal the
/// rest offsets exactly.
MotionSequence forward_kinematics(const Skeleton& skeleton, const PoseTrajectory& pose);

/// Per-frame global orientations of every joint (world <- joint frame),
/// frame-major. Shared by forward_kinematics and the sensor simulator.
std::vector<Quat> global_orientations(const Skeleton& skeleton, const PoseTrajectory& pose);

/// Analytical inverse kinematics: recovers local rotations and root
/// translation from global joint positions.
///
/// Each frame is solved independently, parents before children, in the
/// parent's frame: joints with two or more children get the orthogonal
/// (Kabsch) alignment of normalized rest child-bone directions onto observed
/// directions; joints with one child get the shortest arc from the rest
/// direction to the observed direction, which leaves zero twist about the
/// bone axis relative to the parent frame; leaves inherit the parent
/// orientation (identity local rotation). Quaternion sign continuity is
/// enforced along time afterwards.
///
/// Diagnostics: bone lengths deviating more than 25% from rest, and
/// multi-child frames whose observed directions are collinear (those fall
/// back to a single-bone shortest arc).
PoseTrajectory inverse_kinematics(const Skeleton& skeleton, const MotionSequence& motion,
                                  Diagnostics* diag = nullptr);

}  // namespace virtimu
