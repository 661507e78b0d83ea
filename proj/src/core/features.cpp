#include "features.hpp"

#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace virtimu {

void WindowedDataset::append(const WindowedDataset& other) {
  if (other.windows.empty()) return;
  if (windows.empty() && channels.empty()) {
    *this = other;
    return;
  }
  if (other.window_len != window_len || other.channels != channels)
    throw std::invalid_argument("WindowedDataset: appended windows have a different layout");
  windows.insert(windows.end(), other.windows.begin(), other.windows.end());
}

WindowedDataset segment_windows(const ImuStream& stream, double window_seconds, double overlap,
                                Diagnostics* diag) {
  stream.validate();
  if (window_seconds <= 0.0) throw std::invalid_argument("segment_windows: window must be positive");
  if (overlap < 0.0 || overlap >= 1.0)
    throw std::invalid_argument("segment_windows: overlap must be in [0, 1)");

  auto window_len = static_cast<std::size_t>(std::llround(window_seconds * stream.sample_rate));
  if (window_len < 1) throw std::invalid_argument("segment_windows: window shorter than one sample");
  auto step = static_cast<std::size_t>(
      std::llround(static_cast<double>(window_len) * (1.0 - overlap)));
  if (step < 1) step = 1;

  WindowedDataset out;
  out.window_len = window_len;
  out.channels = channel_names(stream);

  std::size_t total = stream.sample_count();
  if (total < window_len) {
    diag_warn(diag, "segment_windows: stream of " + std::to_string(total) +
                        " samples is shorter than one window (" + std::to_string(window_len) +
                        "); no windows emitted");
    return out;
  }

  std::size_t n_channels = out.channels.size();
  std::size_t count = (total - window_len) / step + 1;
  out.windows.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    std::size_t start = w * step;
    Window win;
    win.label = stream.activity;
    win.subject = stream.subject;
    win.source = stream.source;
    win.samples.resize(window_len * n_channels);
    for (std::size_t s = 0; s < window_len; ++s)
      for (std::size_t c = 0; c < n_channels; ++c)
        win.samples[s * n_channels + c] = channel_value(stream, c, start + s);
    out.windows.push_back(std::move(win));
  }
  return out;
}

std::vector<double> ecdf_features(const Window& window, std::size_t n_channels,
                                  int n_components) {
  if (n_components < 2) throw std::invalid_argument("ecdf_features: n_components must be >= 2");
  if (n_channels == 0 || window.samples.empty() || window.samples.size() % n_channels != 0)
    throw std::invalid_argument("ecdf_features: window is empty or ragged");

  std::size_t n = window.samples.size() / n_channels;
  std::vector<double> features;
  features.reserve(n_channels * (static_cast<std::size_t>(n_components) + 1));
  std::vector<double> column(n);
  for (std::size_t c = 0; c < n_channels; ++c) {
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      column[s] = window.samples[s * n_channels + c];
      sum += column[s];
    }
    std::sort(column.begin(), column.end());
    for (int k = 0; k < n_components; ++k) {
      double p = static_cast<double>(k) / static_cast<double>(n_components - 1);
      features.push_back(interp_quantile(column, p));
    }
    features.push_back(sum / static_cast<double>(n));
  }
  return features;
}

FeatureMatrix featurize(const WindowedDataset& dataset, int n_components) {
  FeatureMatrix out;
  out.dim = dataset.channel_count() * (static_cast<std::size_t>(n_components) + 1);
  out.values.reserve(dataset.windows.size() * out.dim);
  for (const Window& w : dataset.windows) {
    std::vector<double> row = ecdf_features(w, dataset.channel_count(), n_components);
    out.values.insert(out.values.end(), row.begin(), row.end());
    out.labels.push_back(w.label);
    out.subjects.push_back(w.subject);
    out.sources.push_back(w.source);
  }
  return out;
}

void write_feature_csv(const FeatureMatrix& features, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("features: cannot write '" + path + "'");
  out << "label,subject,source";
  for (std::size_t d = 0; d < features.dim; ++d) out << ",f" << d;
  out << "\n";
  char buf[32];
  for (std::size_t r = 0; r < features.row_count(); ++r) {
    out << features.labels[r] << ',' << features.subjects[r] << ','
        << source_name(features.sources[r]);
    const double* row = features.row(r);
    for (std::size_t d = 0; d < features.dim; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[d]);
      out << ',' << buf;
    }
    out << "\n";
  }
  if (!out) throw IoError("features: write failed for '" + path + "'");
}

}  // namespace virtimu
