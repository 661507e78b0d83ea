#pragma once

#include "errors.hpp"
#include "imu_stream.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace virtimu {

/// Monotone piecewise-linear value map for one channel: equal-quantile knot
/// pairs from the virtual (source) and real (target) samples. Values outside
/// the source knot range clamp to the first/last target knot.
struct ChannelMap {
  std::vector<double> source;  // sorted, strictly increasing after tie merge
  std::vector<double> target;  // sorted non-decreasing, same length

  double apply(double v) const;
};

using ChannelSamples = std::map<std::string, std::vector<double>>;

/// Per-channel rank-transformation map aligning virtual channel
/// distributions with real ones.
struct DistributionMap {
  int n_knots = 0;
  std::map<std::string, ChannelMap> channels;

  bool has_channel(const std::string& name) const { return channels.count(name) != 0; }
};

/// Fits knots at quantile levels p_k = k/(n_knots-1): source knots are the
/// empirical quantiles of the virtual samples, target knots those of the
/// real samples (linear interpolation between order statistics). Tied source
/// quantiles are merged with their target values averaged (mid-rank
/// handling). Both sides need the same channel set with >= 2 samples each.
DistributionMap fit_rank_map(const ChannelSamples& virtual_samples,
                             const ChannelSamples& real_samples, int n_knots);

/// Maps every accel/gyro value of the stream through its channel map.
/// Throws std::invalid_argument when a stream channel has no map entry.
ImuStream apply_rank_map(const DistributionMap& map, const ImuStream& stream);

/// In-place variant on flattened window samples (row-major, N x C with
/// channels in `names` order).
void apply_rank_map(const DistributionMap& map, const std::vector<std::string>& names,
                    std::span<double> samples);

/// Rank map with per-activity refinements: apply() uses the activity's map
/// when one was fitted for the stream's label and falls back to the global
/// fit otherwise.
struct CalibrationModel {
  DistributionMap global;
  std::map<std::string, DistributionMap> per_activity;

  const DistributionMap& select(const std::string& activity) const;
};

std::string calibration_to_json(const CalibrationModel& model);
CalibrationModel calibration_from_json(const std::string& text);
void save_calibration(const CalibrationModel& model, const std::string& path);
CalibrationModel load_calibration(const std::string& path);

}  // namespace virtimu
