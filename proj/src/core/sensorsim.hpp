#pragma once

#include "errors.hpp"
#include "imu_stream.hpp"
#include "model.hpp"

namespace virtimu {

/// Virtual accelerometer and gyroscope streams at the given placements.
///
/// The pose is upsampled to internal_rate (cubic splines for positions,
/// slerp for orientations), differentiated with second-order central
/// differences (one-sided at the boundaries), expressed in the sensor frame,
/// decimated to out_rate by interval means, and finally perturbed by the
/// noise model. The accelerometer reports specific force
/// f = R_ws^-1 (p_ddot - g) with g = (0, -9.80665, 0), so a stationary
/// sensor reads +g along world up. Angular velocity is
/// omega = 2 vec(q^-1 q_dot) on the sign-continuous sensor quaternion.
///
/// Per-placement noise generators are seeded from noise.seed mixed with the
/// placement index, so placements may be simulated concurrently without
/// changing the result.
ImuStream simulate_imu(const Skeleton& skeleton, const PoseTrajectory& pose,
                       const std::vector<SensorPlacement>& placements, double out_rate,
                       const NoiseParams& noise, double internal_rate = 100.0,
                       Diagnostics* diag = nullptr);

/// Interval-mean decimation to target_rate; output length
/// floor(n * target / source). target_rate must be positive and not above
/// the stream rate (equal rate returns the stream unchanged).
ImuStream downsample(const ImuStream& stream, double target_rate);

}  // namespace virtimu
