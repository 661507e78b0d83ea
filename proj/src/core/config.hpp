#pragma once

#include "errors.hpp"
#include "forest.hpp"
#include "imu_stream.hpp"
#include "model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace virtimu {

struct PlacementSpec {
  std::string location;
  std::string joint;
  Vec3 mount_rpy_deg = Vec3::Zero();  // sensor mount, intrinsic X-Y-Z, degrees
};

/// Declarative pipeline configuration. Text file of `key = value` lines
/// ('#' comments); CLI flags override via set(). Unknown keys are rejected.
struct PipelineConfig {
  std::string skeleton = "default";  // "default" or a skeleton file path
  std::vector<PlacementSpec> placements = {
      {"waist", "pelvis"}, {"forearm", "left_wrist"}, {"shin", "right_ankle"}};

  double internal_rate_hz = 100.0;
  double output_rate_hz = 20.0;
  double sample_rate_hz = 20.0;  // experiment/featurize target rate

  double accel_white_sigma = 0.05;   // m/s^2
  double gyro_white_sigma = 0.01;    // rad/s
  double accel_bias_sigma = 0.02;    // m/s^2
  double gyro_bias_sigma = 0.005;    // rad/s

  std::uint64_t seed = 12345;

  bool calibrate = true;
  int calibration_knots = 1000;
  bool calibration_per_activity = true;

  double window_seconds = 2.0;
  double window_overlap = 0.5;
  int ecdf_components = 15;

  int rf_trees = 100;
  int rf_min_samples_split = 2;
  int rf_max_depth = 0;
  int rf_features_per_split = 0;
  int runs = 3;

  std::vector<std::string> scenarios = {"real", "virtual", "mixed"};
  std::vector<double> real_fractions = {0.02, 0.05, 0.10, 0.25, 0.50, 1.00};

  std::vector<std::string> synth_activities = {"walking", "running", "jumping",
                                               "sitting", "standing", "lying"};
  int synth_clips_per_activity = 50;
  double synth_duration_min_s = 5.0;
  double synth_duration_max_s = 10.0;
  double synth_fps = 20.0;

  static PipelineConfig load(const std::string& path);

  /// Applies one `key = value` override; throws ConfigError for unknown keys
  /// or unparsable values.
  void set(const std::string& key, const std::string& value);

  void validate() const;

  /// Full key = value dump in canonical order (dry-run plans, manifests).
  std::string to_text() const;

  Skeleton load_skeleton() const;
  std::vector<SensorPlacement> resolve_placements(const Skeleton& skeleton) const;
  NoiseParams noise_params(std::uint64_t noise_seed) const;
  ForestParams forest_params() const;
};

}  // namespace virtimu
