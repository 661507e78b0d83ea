#include "synth.hpp"

#include "kinematics.hpp"
#include "rng.hpp"

#include <cmath>
#include <random>

namespace virtimu {

namespace {

constexpr double kTau = 2.0 * M_PI;
constexpr double kStandingHeight = 0.92;  // pelvis above ground, meters

struct Joints {
  int left_hip, right_hip, left_knee, right_knee, left_ankle, right_ankle;
  int spine1, spine2, spine3, neck;
  int left_shoulder, right_shoulder, left_elbow, right_elbow;

  explicit Joints(const Skeleton& s)
      : left_hip(require(s, "left_hip")), right_hip(require(s, "right_hip")),
        left_knee(require(s, "left_knee")), right_knee(require(s, "right_knee")),
        left_ankle(require(s, "left_ankle")), right_ankle(require(s, "right_ankle")),
        spine1(require(s, "spine1")), spine2(require(s, "spine2")),
        spine3(require(s, "spine3")), neck(require(s, "neck")),
        left_shoulder(require(s, "left_shoulder")), right_shoulder(require(s, "right_shoulder")),
        left_elbow(require(s, "left_elbow")), right_elbow(require(s, "right_elbow")) {}

  static int require(const Skeleton& s, const char* name) {
    int idx = s.find_joint(name);
    if (idx < 0)
      throw std::invalid_argument(std::string("synthetic motion: skeleton lacks joint '") +
                                  name + "'");
    return idx;
  }
};

struct Style {
  double amp = 1.0;    // 0.8 .. 1.2
  double freq = 1.0;   // 0.85 .. 1.15
  double phase = 0.0;  // 0 .. 2 pi
  double sway_phase = 0.0;
  double arm_phase = 0.0;

  static Style draw(Rng& rng) {
    std::uniform_real_distribution<double> amp_d(0.8, 1.2), freq_d(0.85, 1.15),
        phase_d(0.0, kTau);
    Style s;
    s.amp = amp_d(rng);
    s.freq = freq_d(rng);
    s.phase = phase_d(rng);
    s.sway_phase = phase_d(rng);
    s.arm_phase = phase_d(rng);
    return s;
  }
};

Quat rot_x(double a) { return quat_from_axis_angle(Vec3::UnitX(), a); }
Quat rot_y(double a) { return quat_from_axis_angle(Vec3::UnitY(), a); }
Quat rot_z(double a) { return quat_from_axis_angle(Vec3::UnitZ(), a); }

double hump(double x) {  // smooth non-negative burst of sin
  double s = std::sin(x);
  return s > 0.0 ? s * s : 0.0;
}

using FrameFn = void (*)(PoseTrajectory&, std::size_t, double, const Joints&, const Style&);

void walking_frame(PoseTrajectory& pose, std::size_t t, double time, const Joints& j,
                   const Style& st) {
  double w = kTau * 1.8 * st.freq;
  double swing = 0.45 * st.amp * std::sin(w * time + st.phase);
  pose.rotation(t, j.left_hip) = rot_x(swing);
  pose.rotation(t, j.right_hip) = rot_x(-swing);
  pose.rotation(t, j.left_knee) = rot_x(0.55 * st.amp * hump(w * time + st.phase + 2.4));
  pose.rotation(t, j.right_knee) = rot_x(0.55 * st.amp * hump(w * time + st.phase + 2.4 + M_PI));
  pose.rotation(t, j.left_shoulder) = rot_x(-0.28 * st.amp * std::sin(w * time + st.phase));
  pose.rotation(t, j.right_shoulder) = rot_x(0.28 * st.amp * std::sin(w * time + st.phase));
  pose.rotation(t, j.left_elbow) = rot_z(-0.35 - 0.1 * std::sin(w * time + st.arm_phase));
  pose.rotation(t, j.right_elbow) = rot_z(0.35 + 0.1 * std::sin(w * time + st.arm_phase));
  pose.rotation(t, j.spine2) = rot_y(0.06 * std::sin(w * time + st.phase));
  pose.root_translation[t] =
      Vec3(0.02 * std::sin(w * time + st.sway_phase),
           kStandingHeight + 0.03 * st.amp * std::sin(2.0 * w * time + st.phase),
           1.25 * st.amp * time);
}

void running_frame(PoseTrajectory& pose, std::size_t t, double time, const Joints& j,
                   const Style& st) {
  double w = kTau * 2.6 * st.freq;
  double swing = 0.70 * st.amp * std::sin(w * time + st.phase);
  pose.rotation(t, j.left_hip) = rot_x(swing);
  pose.rotation(t, j.right_hip) = rot_x(-swing);
  pose.rotation(t, j.left_knee) = rot_x(1.0 * st.amp * hump(w * time + st.phase + 2.2));
  pose.rotation(t, j.right_knee) = rot_x(1.0 * st.amp * hump(w * time + st.phase + 2.2 + M_PI));
  pose.rotation(t, j.left_shoulder) = rot_x(-0.55 * st.amp * std::sin(w * time + st.phase));
  pose.rotation(t, j.right_shoulder) = rot_x(0.55 * st.amp * std::sin(w * time + st.phase));
  pose.rotation(t, j.left_elbow) = rot_z(-1.15);
  pose.rotation(t, j.right_elbow) = rot_z(1.15);
  pose.rotation(t, j.spine1) = rot_x(-0.12);  // forward lean
  pose.rotation(t, j.spine2) = rot_y(0.10 * std::sin(w * time + st.phase));
  pose.root_translation[t] =
      Vec3(0.025 * std::sin(w * time + st.sway_phase),
           kStandingHeight + 0.055 * st.amp * std::sin(2.0 * w * time + st.phase),
           2.9 * st.amp * time);
}

void jumping_frame(PoseTrajectory& pose, std::size_t t, double time, const Joints& j,
                   const Style& st) {
  double w = kTau * 0.9 * st.freq;
  double cycle = w * time + st.phase;
  double airborne = hump(cycle);       // extension burst
  double crouch = hump(cycle + M_PI);  // counter-phase crouch
  pose.rotation(t, j.left_knee) = rot_x(1.1 * st.amp * crouch);
  pose.rotation(t, j.right_knee) = rot_x(1.1 * st.amp * crouch);
  pose.rotation(t, j.left_hip) = rot_x(-0.6 * st.amp * crouch);
  pose.rotation(t, j.right_hip) = rot_x(-0.6 * st.amp * crouch);
  pose.rotation(t, j.left_shoulder) = rot_x(-0.9 * st.amp * airborne + 0.2);
  pose.rotation(t, j.right_shoulder) = rot_x(-0.9 * st.amp * airborne + 0.2);
  pose.rotation(t, j.spine1) = rot_x(-0.25 * crouch);
  pose.root_translation[t] =
      Vec3(0.01 * std::sin(0.4 * w * time + st.sway_phase),
           kStandingHeight - 0.16 * st.amp * crouch + 0.32 * st.amp * airborne, 0.0);
}

void sitting_frame(PoseTrajectory& pose, std::size_t t, double time, const Joints& j,
                   const Style& st) {
  double w = kTau * 0.3 * st.freq;  // postural sway
  double sway = 0.02 * std::sin(w * time + st.phase);
  pose.rotation(t, j.left_hip) = rot_x(-1.5 + sway);
  pose.rotation(t, j.right_hip) = rot_x(-1.5 + sway);
  pose.rotation(t, j.left_knee) = rot_x(1.4);
  pose.rotation(t, j.right_knee) = rot_x(1.4);
  pose.rotation(t, j.spine1) = rot_x(0.08 + 0.02 * std::sin(0.8 * w * time + st.sway_phase));
  pose.rotation(t, j.left_elbow) = rot_z(-0.5 + sway);
  pose.rotation(t, j.right_elbow) = rot_z(0.5 - sway);
  pose.root_translation[t] = Vec3(0.005 * std::sin(w * time + st.sway_phase),
                                  0.48 + 0.004 * std::sin(0.7 * w * time + st.phase), 0.0);
}

void standing_frame(PoseTrajectory& pose, std::size_t t, double time, const Joints& j,
                    const Style& st) {
  double w = kTau * 0.25 * st.freq;
  double sway = 0.02 * st.amp * std::sin(w * time + st.phase);
  pose.rotation(t, j.left_hip) = rot_x(sway);
  pose.rotation(t, j.right_hip) = rot_x(sway);
  pose.rotation(t, j.spine2) = rot_x(-sway + 0.015 * std::sin(1.3 * w * time + st.sway_phase));
  pose.rotation(t, j.left_elbow) = rot_z(-0.15 + 0.01 * std::sin(w * time + st.arm_phase));
  pose.rotation(t, j.right_elbow) = rot_z(0.15 - 0.01 * std::sin(w * time + st.arm_phase));
  pose.root_translation[t] =
      Vec3(0.01 * std::sin(w * time + st.sway_phase), kStandingHeight,
           0.01 * std::sin(0.8 * w * time + st.phase));
}

void lying_frame(PoseTrajectory& pose, std::size_t t, double time, const Joints& j,
                 const Style& st) {
  double w = kTau * 0.22 * st.freq;  // breathing-scale movement
  double jitter = 0.02 * std::sin(w * time + st.phase);
  pose.rotation(t, 0) = rot_x(M_PI / 2.0);  // supine: spine axis horizontal
  pose.rotation(t, j.left_hip) = rot_x(jitter);
  pose.rotation(t, j.right_hip) = rot_x(-jitter);
  pose.rotation(t, j.spine2) = rot_x(0.015 * std::sin(w * time + st.sway_phase));
  pose.rotation(t, j.left_elbow) = rot_z(-0.2 + jitter);
  pose.rotation(t, j.right_elbow) = rot_z(0.2 - jitter);
  pose.root_translation[t] = Vec3(0.004 * std::sin(w * time + st.sway_phase),
                                  0.15 + 0.002 * std::sin(w * time + st.phase), 0.0);
}

}  // namespace

const std::vector<std::string>& synthetic_activities() {
  static const std::vector<std::string> names = {"walking", "running", "jumping",
                                                 "sitting", "standing", "lying"};
  return names;
}

MotionSequence generate_synthetic_motion(const Skeleton& skeleton, const std::string& activity,
                                         double duration_s, std::uint64_t style_seed,
                                         double fps) {
  if (duration_s < 1.0 || duration_s > 60.0)
    throw std::invalid_argument("synthetic motion: duration must be in [1, 60] s");
  if (fps <= 0.0) throw std::invalid_argument("synthetic motion: fps must be positive");

  FrameFn frame_fn = nullptr;
  if (activity == "walking") frame_fn = walking_frame;
  else if (activity == "running") frame_fn = running_frame;
  else if (activity == "jumping") frame_fn = jumping_frame;
  else if (activity == "sitting") frame_fn = sitting_frame;
  else if (activity == "standing") frame_fn = standing_frame;
  else if (activity == "lying") frame_fn = lying_frame;
  else
    throw std::invalid_argument("synthetic motion: unknown activity '" + activity +
                                "' (expected walking|running|jumping|sitting|standing|lying)");

  Joints joints(skeleton);
  Rng rng = make_rng(derive_seed(style_seed, seed_tag("synth-style")));
  Style style = Style::draw(rng);

  auto frames = static_cast<std::size_t>(std::llround(duration_s * fps));
  if (frames < 2) throw std::invalid_argument("synthetic motion: too few frames");

  PoseTrajectory pose;
  pose.frame_rate = fps;
  pose.joint_count = skeleton.joint_count();
  pose.root_translation.resize(frames);
  pose.local_rotations.assign(frames * pose.joint_count, Quat::identity());
  for (std::size_t t = 0; t < frames; ++t)
    frame_fn(pose, t, static_cast<double>(t) / fps, joints, style);
  enforce_sign_continuity(pose);

  MotionSequence motion = forward_kinematics(skeleton, pose);
  motion.activity = activity;
  return motion;
}

}  // namespace virtimu
