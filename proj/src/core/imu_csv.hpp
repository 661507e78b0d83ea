#pragma once

#include "errors.hpp"
#include "imu_stream.hpp"

#include <string>
#include <vector>

namespace virtimu {

/// CSV carrier for real and virtual IMU data. Columns:
/// `t_s,subject,activity,location,ax,ay,az,gx,gy,gz` (gyro columns optional),
/// SI units. Rows group into one single-location stream per (subject,
/// contiguous activity run, location); time must be monotone and uniform
/// within 1e-6 s jitter per group. The sample rate is inferred from the
/// median time step and snapped to an integer when within 1e-6 relative.
/// The source tag is contextual: callers tag a whole file real or virtual.
std::vector<ImuStream> read_imu_csv(const std::string& path, Source source);

/// One location block per track, timestamps k / sample_rate, values at 17
/// significant digits; read_imu_csv(write_imu_csv(x)) reproduces the parsed
/// values bitwise.
void write_imu_csv(const std::vector<ImuStream>& streams, const std::string& path);

}  // namespace virtimu
