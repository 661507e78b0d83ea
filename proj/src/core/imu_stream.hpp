#pragma once

#include "errors.hpp"
#include "math.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace virtimu {

/// Where a stream came from. Virtual streams are subject-less by construction.
enum class Source { Real, Virtual };

inline const char* source_name(Source s) { return s == Source::Real ? "real" : "virtual"; }

struct SensorPlacement {
  int joint_index = 0;
  std::string location;           // e.g. "forearm"
  Quat mount = Quat::identity();  // sensor frame relative to the joint frame
};

/// White Gaussian noise per sample plus a constant per-clip bias per axis,
/// both drawn from the seeded generator.
struct NoiseParams {
  double accel_white_sigma = 0.0;  // m/s^2
  double gyro_white_sigma = 0.0;   // rad/s
  double accel_bias_sigma = 0.0;   // m/s^2
  double gyro_bias_sigma = 0.0;    // rad/s
  std::uint64_t seed = 0;

  void validate() const {
    if (accel_white_sigma < 0 || gyro_white_sigma < 0 || accel_bias_sigma < 0 ||
        gyro_bias_sigma < 0)
      throw std::invalid_argument("noise: sigmas must be >= 0");
  }
};

/// One sensor location's 6-axis series. Gyro may be absent (real datasets
/// that only ship accelerometry).
struct SensorTrack {
  std::string location;
  std::vector<Vec3> accel;  // m/s^2, specific force in the sensor frame
  std::vector<Vec3> gyro;   // rad/s, angular velocity in the sensor frame

  bool has_gyro() const { return !gyro.empty(); }
};

/// Multi-placement 6-axis time series with shared rate and metadata.
struct ImuStream {
  double sample_rate = 0.0;  // Hz
  std::vector<SensorTrack> tracks;
  std::string activity;
  std::string subject;
  Source source = Source::Virtual;

  std::size_t sample_count() const { return tracks.empty() ? 0 : tracks[0].accel.size(); }
  void validate() const;
};

/// Channel names in stream order: per track "<location>.ax/.ay/.az" then
/// ".gx/.gy/.gz" when the track carries gyro.
std::vector<std::string> channel_names(const ImuStream& stream);

/// Copy with gyro channels removed. Empty-track streams pass through with a
/// diagnostic.
ImuStream select_accel_channels(const ImuStream& stream, Diagnostics* diag = nullptr);

/// Zips single-location streams of one recording (same subject, activity,
/// rate and length) into one multi-track stream, ordered by `location_order`.
/// Throws std::invalid_argument on missing locations or mismatched shapes.
ImuStream merge_locations(std::span<const ImuStream> parts,
                          const std::vector<std::string>& location_order);

/// Flattened sample access: value of `channel` (index into channel_names
/// order) at `sample`.
double channel_value(const ImuStream& stream, std::size_t channel, std::size_t sample);

}  // namespace virtimu
