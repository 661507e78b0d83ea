#include "sensorsim.hpp"

#include "kinematics.hpp"
#include "numerics.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <array>
#include <cmath>
#include <random>

namespace virtimu {

namespace {

// Second-order accurate first derivative of a quaternion sequence,
// componentwise; central in the interior, one-sided at the ends.
Quat quat_derivative(const std::vector<Quat>& q, std::size_t k, double dt) {
  std::size_t n = q.size();
  auto comb = [](const Quat& a, double ca, const Quat& b, double cb, const Quat& c, double cc) {
    return Quat{ca * a.w + cb * b.w + cc * c.w, ca * a.x + cb * b.x + cc * c.x,
                ca * a.y + cb * b.y + cc * c.y, ca * a.z + cb * b.z + cc * c.z};
  };
  Quat num;
  if (k == 0)
    num = comb(q[0], -3.0, q[1], 4.0, q[2], -1.0);
  else if (k == n - 1)
    num = comb(q[n - 1], 3.0, q[n - 2], -4.0, q[n - 3], 1.0);
  else
    num = comb(q[k + 1], 1.0, q[k - 1], -1.0, q[k], 0.0);
  double s = 1.0 / (2.0 * dt);
  return {num.w * s, num.x * s, num.y * s, num.z * s};
}

Vec3 second_difference(const std::vector<Vec3>& p, std::size_t k, double dt) {
  std::size_t n = p.size();
  Vec3 num;
  if (k == 0)
    num = 2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3];
  else if (k == n - 1)
    num = 2.0 * p[n - 1] - 5.0 * p[n - 2] + 4.0 * p[n - 3] - p[n - 4];
  else
    num = p[k + 1] - 2.0 * p[k] + p[k - 1];
  return num / (dt * dt);
}

std::vector<Vec3> decimate_mean(const std::vector<Vec3>& in, double in_rate, double out_rate,
                                std::size_t out_len) {
  std::vector<Vec3> out(out_len, Vec3::Zero());
  std::vector<std::size_t> counts(out_len, 0);
  for (std::size_t i = 0; i < in.size(); ++i) {
    auto k = static_cast<std::size_t>(std::floor(static_cast<double>(i) * out_rate / in_rate));
    if (k >= out_len) break;
    out[k] += in[i];
    ++counts[k];
  }
  for (std::size_t k = 0; k < out_len; ++k) out[k] /= static_cast<double>(counts[k]);
  return out;
}

}  // namespace

ImuStream simulate_imu(const Skeleton& skeleton, const PoseTrajectory& pose,
                       const std::vector<SensorPlacement>& placements, double out_rate,
                       const NoiseParams& noise, double internal_rate, Diagnostics* diag) {
  validate_pose(skeleton, pose);
  noise.validate();
  if (out_rate <= 0.0 || internal_rate <= 0.0)
    throw std::invalid_argument("simulate_imu: rates must be positive");
  if (out_rate > internal_rate * (1.0 + 1e-9))
    throw std::invalid_argument("simulate_imu: out_rate exceeds internal_rate");
  for (const SensorPlacement& p : placements)
    if (p.joint_index < 0 || p.joint_index >= static_cast<int>(skeleton.joint_count()))
      throw std::invalid_argument("simulate_imu: placement '" + p.location +
                                  "' joint index out of range");

  std::size_t frames = pose.frame_count();
  double knot_dt = 1.0 / pose.frame_rate;
  double duration = static_cast<double>(frames - 1) * knot_dt;
  auto internal_len = static_cast<std::size_t>(std::floor(duration * internal_rate + 1e-9)) + 1;
  auto out_len = static_cast<std::size_t>(
      std::floor(static_cast<double>(internal_len) * out_rate / internal_rate));
  if (internal_len < 4 || out_len < 2)
    throw std::invalid_argument("simulate_imu: pose too short for the requested rates");

  MotionSequence joint_positions = forward_kinematics(skeleton, pose);
  std::vector<Quat> joint_orientations = global_orientations(skeleton, pose);

  if (placements.empty()) diag_warn(diag, "simulate_imu: no placements configured");

  ImuStream stream;
  stream.sample_rate = out_rate;
  stream.source = Source::Virtual;
  stream.tracks.resize(placements.size());

  double dt = 1.0 / internal_rate;
  std::size_t joints = skeleton.joint_count();

  parallel_for(placements.size(), [&](std::size_t pi) {
    const SensorPlacement& placement = placements[pi];
    auto j = static_cast<std::size_t>(placement.joint_index);

    // Knot-level sensor quaternions, sign-continuous so that slerp yields a
    // continuous path and the derivative is well defined.
    std::vector<Quat> knots(frames);
    for (std::size_t t = 0; t < frames; ++t)
      knots[t] = quat_multiply(joint_orientations[t * joints + j], placement.mount);
    for (std::size_t t = 1; t < frames; ++t)
      if (knots[t - 1].dot(knots[t]) < 0.0) knots[t] = knots[t].negated();

    std::array<std::vector<double>, 3> axis_values;
    for (int a = 0; a < 3; ++a) {
      axis_values[a].resize(frames);
      for (std::size_t t = 0; t < frames; ++t) axis_values[a][t] = joint_positions.at(t, j)[a];
    }
    std::array<CubicSpline, 3> splines = {CubicSpline(0.0, knot_dt, axis_values[0]),
                                          CubicSpline(0.0, knot_dt, axis_values[1]),
                                          CubicSpline(0.0, knot_dt, axis_values[2])};

    std::vector<Vec3> pos(internal_len);
    std::vector<Quat> orient(internal_len);
    for (std::size_t k = 0; k < internal_len; ++k) {
      double tk = static_cast<double>(k) * dt;
      pos[k] = Vec3(splines[0].eval(tk), splines[1].eval(tk), splines[2].eval(tk));
      double s = tk * pose.frame_rate;
      auto seg = static_cast<std::size_t>(std::floor(s));
      if (seg >= frames - 1) seg = frames - 2;
      orient[k] = slerp(knots[seg], knots[seg + 1], s - static_cast<double>(seg));
    }
    for (std::size_t k = 1; k < internal_len; ++k)
      if (orient[k - 1].dot(orient[k]) < 0.0) orient[k] = orient[k].negated();

    std::vector<Vec3> accel(internal_len), gyro(internal_len);
    for (std::size_t k = 0; k < internal_len; ++k) {
      Vec3 proper = second_difference(pos, k, dt) - kGravityWorld;
      accel[k] = quat_rotate(orient[k].inverse(), proper);
      Quat qdot = quat_derivative(orient, k, dt);
      gyro[k] = 2.0 * quat_multiply_raw(orient[k].inverse(), qdot).vec();
    }

    SensorTrack& track = stream.tracks[pi];
    track.location = placement.location;
    track.accel = decimate_mean(accel, internal_rate, out_rate, out_len);
    track.gyro = decimate_mean(gyro, internal_rate, out_rate, out_len);

    Rng rng = make_rng(derive_seed(noise.seed, seed_tag("imu-noise"), pi));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec3 accel_bias, gyro_bias;
    for (int a = 0; a < 3; ++a) accel_bias[a] = noise.accel_bias_sigma * gauss(rng);
    for (int a = 0; a < 3; ++a) gyro_bias[a] = noise.gyro_bias_sigma * gauss(rng);
    for (std::size_t k = 0; k < out_len; ++k) {
      for (int a = 0; a < 3; ++a)
        track.accel[k][a] += accel_bias[a] + noise.accel_white_sigma * gauss(rng);
      for (int a = 0; a < 3; ++a)
        track.gyro[k][a] += gyro_bias[a] + noise.gyro_white_sigma * gauss(rng);
    }
  });

  return stream;
}

ImuStream downsample(const ImuStream& stream, double target_rate) {
  stream.validate();
  if (target_rate <= 0.0) throw std::invalid_argument("downsample: target rate must be positive");
  if (target_rate > stream.sample_rate * (1.0 + 1e-9))
    throw std::invalid_argument("downsample: target rate exceeds stream rate");
  if (std::abs(target_rate - stream.sample_rate) <= 1e-9 * stream.sample_rate) return stream;

  std::size_t n = stream.sample_count();
  auto out_len =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * target_rate / stream.sample_rate));
  if (out_len == 0) throw std::invalid_argument("downsample: stream too short for target rate");

  ImuStream out = stream;
  out.sample_rate = target_rate;
  for (std::size_t ti = 0; ti < stream.tracks.size(); ++ti) {
    out.tracks[ti].accel =
        decimate_mean(stream.tracks[ti].accel, stream.sample_rate, target_rate, out_len);
    if (stream.tracks[ti].has_gyro())
      out.tracks[ti].gyro =
          decimate_mean(stream.tracks[ti].gyro, stream.sample_rate, target_rate, out_len);
  }
  return out;
}

}  // namespace virtimu
