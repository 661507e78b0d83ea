#pragma once

#include "errors.hpp"
#include "math.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace virtimu {

struct JointDef {
  std::string name;
  int parent = -1;       // -1 for the root, otherwise index of the parent joint
  Vec3 rest_offset = Vec3::Zero();  // bone vector from parent to this joint, rest pose, meters
};

/// Rooted joint tree. Joint 0 is the pelvis; parents precede children, so a
/// single forward pass visits parents first. Immutable after construction.
class Skeleton {
 public:
  explicit Skeleton(std::vector<JointDef> joints);

  /// The 22-joint tree of the motion source (SMPL-style layout), with the
  /// canonical rest pose shipped in data/skeleton_smpl22.txt.
  static Skeleton default22();

  /// Text format, one joint per line: `index name parent_index ox oy oz`,
  /// root parent_index = -1. Lines starting with '#' are comments.
  static Skeleton load(const std::string& path);
  void save(const std::string& path) const;

  std::size_t joint_count() const { return joints_.size(); }
  const JointDef& joint(std::size_t i) const { return joints_[i]; }
  const std::vector<JointDef>& joints() const { return joints_; }
  const std::vector<int>& children(std::size_t i) const { return children_[i]; }

  /// Index of the named joint, or -1.
  int find_joint(std::string_view name) const;

 private:
  std::vector<JointDef> joints_;
  std::vector<std::vector<int>> children_;
};

/// Time-indexed global joint positions, meters. Frame-major storage.
struct MotionSequence {
  double frame_rate = 0.0;  // Hz
  std::size_t joint_count = 0;
  std::vector<Vec3> positions;  // frame_count * joint_count
  std::string activity;
  std::string subject;
  std::string prompt;

  std::size_t frame_count() const {
    return joint_count == 0 ? 0 : positions.size() / joint_count;
  }
  const Vec3& at(std::size_t frame, std::size_t joint) const {
    return positions[frame * joint_count + joint];
  }
  Vec3& at(std::size_t frame, std::size_t joint) {
    return positions[frame * joint_count + joint];
  }
};

/// Per-frame root translation plus per-joint local rotations (each joint's
/// frame relative to its parent frame; root relative to world). At rest all
/// joint frames are world-aligned.
struct PoseTrajectory {
  double frame_rate = 0.0;  // Hz
  std::size_t joint_count = 0;
  std::vector<Vec3> root_translation;  // frame_count
  std::vector<Quat> local_rotations;   // frame_count * joint_count

  std::size_t frame_count() const { return root_translation.size(); }
  const Quat& rotation(std::size_t frame, std::size_t joint) const {
    return local_rotations[frame * joint_count + joint];
  }
  Quat& rotation(std::size_t frame, std::size_t joint) {
    return local_rotations[frame * joint_count + joint];
  }
};

/// Throws std::invalid_argument unless the motion matches the skeleton,
/// has >= 2 frames, a positive frame rate and finite coordinates.
void validate_motion(const Skeleton& skeleton, const MotionSequence& motion);

/// Throws std::invalid_argument unless shapes match the skeleton, all
/// quaternions are unit within 1e-9 and every joint's quaternion sequence is
/// sign-continuous (consecutive dot products >= 0).
void validate_pose(const Skeleton& skeleton, const PoseTrajectory& pose);

/// Flips quaternion signs in place so consecutive frames of each joint have
/// non-negative dot products.
void enforce_sign_continuity(PoseTrajectory& pose);

}  // namespace virtimu
