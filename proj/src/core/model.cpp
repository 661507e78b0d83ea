#include "model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace virtimu {

Skeleton::Skeleton(std::vector<JointDef> joints) : joints_(std::move(joints)) {
  if (joints_.empty()) throw std::invalid_argument("skeleton: no joints");
  if (joints_[0].parent != -1)
    throw std::invalid_argument("skeleton: joint 0 must be the root (parent -1)");
  children_.resize(joints_.size());
  for (std::size_t i = 1; i < joints_.size(); ++i) {
    const JointDef& j = joints_[i];
    if (j.parent < 0)
      throw std::invalid_argument("skeleton: joint " + std::to_string(i) +
                                  " ('" + j.name + "') has no parent; only joint 0 is the root");
    if (j.parent >= static_cast<int>(i))
      throw std::invalid_argument("skeleton: joint " + std::to_string(i) +
                                  " ('" + j.name + "') references parent " +
                                  std::to_string(j.parent) +
                                  "; parents must precede children");
    if (j.rest_offset.norm() <= 0.0)
      throw std::invalid_argument("skeleton: joint " + std::to_string(i) +
                                  " ('" + j.name + "') has a zero-length rest offset");
    children_[j.parent].push_back(static_cast<int>(i));
  }
}

int Skeleton::find_joint(std::string_view name) const {
  for (std::size_t i = 0; i < joints_.size(); ++i)
    if (joints_[i].name == name) return static_cast<int>(i);
  return -1;
}

Skeleton Skeleton::default22() {
  // pelvis; L/R hip, knee, ankle, foot; spine1-3; neck, head;
  // L/R collar, shoulder, elbow, wrist. Y up, +X left, +Z forward, meters.
  std::vector<JointDef> j = {
      {"pelvis", -1, {0.0, 0.0, 0.0}},
      {"left_hip", 0, {0.095, -0.06, 0.0}},
      {"right_hip", 0, {-0.095, -0.06, 0.0}},
      {"spine1", 0, {0.0, 0.11, 0.0}},
      {"left_knee", 1, {0.0, -0.40, 0.0}},
      {"right_knee", 2, {0.0, -0.40, 0.0}},
      {"spine2", 3, {0.0, 0.13, 0.0}},
      {"left_ankle", 4, {0.0, -0.42, 0.0}},
      {"right_ankle", 5, {0.0, -0.42, 0.0}},
      {"spine3", 6, {0.0, 0.13, 0.0}},
      {"left_foot", 7, {0.0, -0.06, 0.13}},
      {"right_foot", 8, {0.0, -0.06, 0.13}},
      {"neck", 9, {0.0, 0.16, 0.0}},
      {"left_collar", 9, {0.07, 0.10, 0.0}},
      {"right_collar", 9, {-0.07, 0.10, 0.0}},
      {"head", 12, {0.0, 0.12, 0.0}},
      {"left_shoulder", 13, {0.12, 0.02, 0.0}},
      {"right_shoulder", 14, {-0.12, 0.02, 0.0}},
      {"left_elbow", 16, {0.26, 0.0, 0.0}},
      {"right_elbow", 17, {-0.26, 0.0, 0.0}},
      {"left_wrist", 18, {0.25, 0.0, 0.0}},
      {"right_wrist", 19, {-0.25, 0.0, 0.0}},
  };
  return Skeleton(std::move(j));
}

Skeleton Skeleton::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("skeleton: cannot open '" + path + "'");
  std::vector<JointDef> joints;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    auto pos = trimmed.find_first_not_of(" \t\r");
    if (pos == std::string::npos || trimmed[pos] == '#') continue;
    std::istringstream ls(line);
    std::size_t index;
    JointDef def;
    if (!(ls >> index >> def.name >> def.parent >> def.rest_offset.x() >>
          def.rest_offset.y() >> def.rest_offset.z()))
      throw ParseError("skeleton: '" + path + "' line " + std::to_string(line_no) +
                       ": expected `index name parent ox oy oz`");
    if (index != joints.size())
      throw ParseError("skeleton: '" + path + "' line " + std::to_string(line_no) +
                       ": joint index " + std::to_string(index) + " out of order");
    joints.push_back(std::move(def));
  }
  try {
    return Skeleton(std::move(joints));
  } catch (const std::invalid_argument& e) {
    throw ParseError("skeleton: '" + path + "': " + e.what());
  }
}

void Skeleton::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("skeleton: cannot write '" + path + "'");
  out << "# index name parent_index offset_x offset_y offset_z\n";
  char buf[160];
  for (std::size_t i = 0; i < joints_.size(); ++i) {
    const JointDef& j = joints_[i];
    std::snprintf(buf, sizeof(buf), "%zu %s %d %.17g %.17g %.17g\n", i, j.name.c_str(),
                  j.parent, j.rest_offset.x(), j.rest_offset.y(), j.rest_offset.z());
    out << buf;
  }
  if (!out) throw IoError("skeleton: write failed for '" + path + "'");
}

void validate_motion(const Skeleton& skeleton, const MotionSequence& motion) {
  if (motion.frame_rate <= 0.0)
    throw std::invalid_argument("motion: frame rate must be positive");
  if (motion.joint_count != skeleton.joint_count())
    throw std::invalid_argument("motion: joint count " + std::to_string(motion.joint_count) +
                                " does not match skeleton (" +
                                std::to_string(skeleton.joint_count()) + ")");
  if (motion.positions.size() % motion.joint_count != 0)
    throw std::invalid_argument("motion: ragged position array");
  if (motion.frame_count() < 2)
    throw std::invalid_argument("motion: needs at least 2 frames");
  for (const Vec3& p : motion.positions)
    if (!p.allFinite()) throw std::invalid_argument("motion: non-finite coordinate");
}

void validate_pose(const Skeleton& skeleton, const PoseTrajectory& pose) {
  if (pose.frame_rate <= 0.0)
    throw std::invalid_argument("pose: frame rate must be positive");
  if (pose.joint_count != skeleton.joint_count())
    throw std::invalid_argument("pose: joint count " + std::to_string(pose.joint_count) +
                                " does not match skeleton (" +
                                std::to_string(skeleton.joint_count()) + ")");
  if (pose.local_rotations.size() != pose.frame_count() * pose.joint_count)
    throw std::invalid_argument("pose: rotation array does not match frame count");
  for (const Quat& q : pose.local_rotations)
    if (std::abs(q.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("pose: non-unit quaternion");
  std::size_t frames = pose.frame_count();
  for (std::size_t j = 0; j < pose.joint_count; ++j)
    for (std::size_t t = 1; t < frames; ++t)
      if (pose.rotation(t - 1, j).dot(pose.rotation(t, j)) < 0.0)
        throw std::invalid_argument("pose: quaternion sequence not sign-continuous at joint " +
                                    std::to_string(j) + ", frame " + std::to_string(t));
}

void enforce_sign_continuity(PoseTrajectory& pose) {
  std::size_t frames = pose.frame_count();
  for (std::size_t j = 0; j < pose.joint_count; ++j)
    for (std::size_t t = 1; t < frames; ++t)
      if (pose.rotation(t - 1, j).dot(pose.rotation(t, j)) < 0.0)
        pose.rotation(t, j) = pose.rotation(t, j).negated();
}

}  // namespace virtimu
