#include "kinematics.hpp"

#include "parallel.hpp"

#include <Eigen/SVD>

#include <atomic>
#include <cmath>

namespace virtimu {

std::vector<Quat> global_orientations(const Skeleton& skeleton, const PoseTrajectory& pose) {
  std::size_t frames = pose.frame_count();
  std::size_t joints = pose.joint_count;
  std::vector<Quat> global(frames * joints);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t j = 0; j < joints; ++j) {
      const Quat& local = pose.rotation(t, j);
      int parent = skeleton.joint(j).parent;
      global[t * joints + j] =
          parent < 0 ? local : quat_multiply(global[t * joints + parent], local);
    }
  }
  return global;
}

MotionSequence forward_kinematics(const Skeleton& skeleton, const PoseTrajectory& pose) {
  if (pose.joint_count != skeleton.joint_count())
    throw std::invalid_argument("forward_kinematics: pose does not match skeleton");
  if (pose.local_rotations.size() != pose.frame_count() * pose.joint_count)
    throw std::invalid_argument("forward_kinematics: ragged rotation array");

  std::size_t frames = pose.frame_count();
  std::size_t joints = pose.joint_count;
  MotionSequence motion;
  motion.frame_rate = pose.frame_rate;
  motion.joint_count = joints;
  motion.positions.resize(frames * joints);

  std::vector<Quat> global = global_orientations(skeleton, pose);
  for (std::size_t t = 0; t < frames; ++t) {
    motion.at(t, 0) = pose.root_translation[t];
    for (std::size_t j = 1; j < joints; ++j) {
      int parent = skeleton.joint(j).parent;
      motion.at(t, j) = motion.at(t, parent) +
                        quat_rotate(global[t * joints + parent], skeleton.joint(j).rest_offset);
    }
  }
  return motion;
}

namespace {

// Kabsch on unit direction pairs: the rotation R minimizing
// sum |R rest_i - obs_i|^2, with the reflection guard on the smallest
// singular value. Returns false when the observed directions are collinear
// (rank < 2), in which case the alignment is ambiguous.
bool kabsch_align(const std::vector<Vec3>& rest, const std::vector<Vec3>& obs, Quat& out) {
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < rest.size(); ++i) h += obs[i] * rest[i].transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(1) < 1e-9) return false;
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  double d = (u * v.transpose()).determinant();
  Mat3 r = u * Eigen::DiagonalMatrix<double, 3>(1.0, 1.0, d < 0.0 ? -1.0 : 1.0) * v.transpose();
  out = quat_from_matrix(r);
  return true;
}

}  // namespace

PoseTrajectory inverse_kinematics(const Skeleton& skeleton, const MotionSequence& motion,
                                  Diagnostics* diag) {
  validate_motion(skeleton, motion);

  std::size_t frames = motion.frame_count();
  std::size_t joints = motion.joint_count;

  PoseTrajectory pose;
  pose.frame_rate = motion.frame_rate;
  pose.joint_count = joints;
  pose.root_translation.resize(frames);
  pose.local_rotations.resize(frames * joints);

  std::atomic<std::size_t> bone_length_violations{0};
  std::atomic<std::size_t> collinear_fallbacks{0};

  parallel_for(frames, [&](std::size_t t) {
    std::vector<Quat> global(joints);
    std::vector<Vec3> rest_dirs, obs_dirs;

    pose.root_translation[t] = motion.at(t, 0);
    for (std::size_t j = 0; j < joints; ++j) {
      const auto& kids = skeleton.children(j);
      int parent = skeleton.joint(j).parent;
      const Quat parent_global = parent < 0 ? Quat::identity() : global[parent];
      const Quat parent_inverse = parent_global.inverse();

      Quat local = Quat::identity();
      if (!kids.empty()) {
        rest_dirs.clear();
        obs_dirs.clear();
        for (int c : kids) {
          const Vec3& rest = skeleton.joint(c).rest_offset;
          Vec3 bone = motion.at(t, c) - motion.at(t, j);
          double len = bone.norm();
          double rest_len = rest.norm();
          if (std::abs(len - rest_len) > 0.25 * rest_len)
            bone_length_violations.fetch_add(1, std::memory_order_relaxed);
          if (len <= 0.0) continue;  // coincident joints carry no direction
          rest_dirs.push_back(rest / rest_len);
          // Observed child-bone direction expressed in the parent frame, so
          // the solve below yields the local rotation directly.
          obs_dirs.push_back(quat_rotate(parent_inverse, bone / len));
        }
        if (rest_dirs.size() >= 2) {
          if (!kabsch_align(rest_dirs, obs_dirs, local)) {
            collinear_fallbacks.fetch_add(1, std::memory_order_relaxed);
            local = shortest_arc(rest_dirs[0], obs_dirs[0]);
          }
        } else if (rest_dirs.size() == 1) {
          local = shortest_arc(rest_dirs[0], obs_dirs[0]);
        }
      }
      pose.rotation(t, j) = local;
      global[j] = quat_multiply(parent_global, local);
    }
  });

  if (std::size_t n = bone_length_violations.load())
    diag_warn(diag, "inverse_kinematics: " + std::to_string(n) +
                        " bone length(s) deviate more than 25% from rest");
  if (std::size_t n = collinear_fallbacks.load())
    diag_warn(diag, "inverse_kinematics: " + std::to_string(n) +
                        " multi-child frame(s) with collinear child directions; "
                        "fell back to single-bone alignment");

  enforce_sign_continuity(pose);
  return pose;
}

}  // namespace virtimu
