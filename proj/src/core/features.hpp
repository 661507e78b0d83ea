#pragma once

#include "errors.hpp"
#include "imu_stream.hpp"

#include <string>
#include <vector>

namespace virtimu {

/// One segmented window: N samples x C channels, row-major, with the
/// metadata inherited from the source stream.
struct Window {
  std::vector<double> samples;  // length N * C
  std::string label;
  std::string subject;
  Source source = Source::Real;
};

/// Windows that share a channel layout and length.
struct WindowedDataset {
  std::size_t window_len = 0;  // N
  std::vector<std::string> channels;
  std::vector<Window> windows;

  std::size_t channel_count() const { return channels.size(); }
  void append(const WindowedDataset& other);
};

/// Sliding windows of window_seconds at the stream rate with the given
/// overlap fraction; step = round(N * (1 - overlap)) clamped to >= 1.
/// Trailing partial windows are dropped; a stream shorter than one window
/// yields an empty dataset plus a diagnostic.
WindowedDataset segment_windows(const ImuStream& stream, double window_seconds = 2.0,
                                double overlap = 0.5, Diagnostics* diag = nullptr);

/// ECDF feature vector of one window: per channel, the inverse empirical CDF
/// sampled at n_components evenly spaced probabilities (endpoints included,
/// linear interpolation between order statistics) followed by the channel
/// mean. Dimension = C * (n_components + 1).
std::vector<double> ecdf_features(const Window& window, std::size_t n_channels,
                                  int n_components = 15);

/// Feature rows plus per-row metadata. Row-major, fixed dimension.
struct FeatureMatrix {
  std::size_t dim = 0;
  std::vector<double> values;  // rows * dim
  std::vector<std::string> labels;
  std::vector<std::string> subjects;
  std::vector<Source> sources;

  std::size_t row_count() const { return labels.size(); }
  const double* row(std::size_t r) const { return values.data() + r * dim; }
};

FeatureMatrix featurize(const WindowedDataset& dataset, int n_components = 15);

/// CSV with header `label,subject,source,f0..f{D-1}`; values at 17
/// significant digits.
void write_feature_csv(const FeatureMatrix& features, const std::string& path);

}  // namespace virtimu
