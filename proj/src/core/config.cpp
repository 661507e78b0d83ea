#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace virtimu {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": '" + value + "' is not a number");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": '" + value + "' is not an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": '" + value + "' is not an unsigned integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigError("config: " + key + ": '" + value + "' is not a boolean");
}

/// `location:joint` or `location:joint:rx:ry:rz` (degrees).
PlacementSpec parse_placement(const std::string& text) {
  std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 2 && parts.size() != 5)
    throw ConfigError("config: placement '" + text +
                      "' must be location:joint[:rx:ry:rz]");
  PlacementSpec spec;
  spec.location = parts[0];
  spec.joint = parts[1];
  if (spec.location.empty() || spec.joint.empty())
    throw ConfigError("config: placement '" + text + "' has empty fields");
  if (parts.size() == 5)
    for (int i = 0; i < 3; ++i)
      spec.mount_rpy_deg[i] = parse_double("placement", parts[2 + i]);
  return spec;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
  if (key == "skeleton") skeleton = value;
  else if (key == "placements") {
    placements.clear();
    for (const std::string& p : split(value, ',')) placements.push_back(parse_placement(p));
  } else if (key == "internal_rate_hz") internal_rate_hz = parse_double(key, value);
  else if (key == "output_rate_hz") output_rate_hz = parse_double(key, value);
  else if (key == "sample_rate_hz") sample_rate_hz = parse_double(key, value);
  else if (key == "accel_white_sigma") accel_white_sigma = parse_double(key, value);
  else if (key == "gyro_white_sigma") gyro_white_sigma = parse_double(key, value);
  else if (key == "accel_bias_sigma") accel_bias_sigma = parse_double(key, value);
  else if (key == "gyro_bias_sigma") gyro_bias_sigma = parse_double(key, value);
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "calibrate") calibrate = parse_bool(key, value);
  else if (key == "calibration_knots") calibration_knots = parse_int(key, value);
  else if (key == "calibration_per_activity") calibration_per_activity = parse_bool(key, value);
  else if (key == "window_seconds") window_seconds = parse_double(key, value);
  else if (key == "window_overlap") window_overlap = parse_double(key, value);
  else if (key == "ecdf_components") ecdf_components = parse_int(key, value);
  else if (key == "rf_trees") rf_trees = parse_int(key, value);
  else if (key == "rf_min_samples_split") rf_min_samples_split = parse_int(key, value);
  else if (key == "rf_max_depth") rf_max_depth = parse_int(key, value);
  else if (key == "rf_features_per_split") rf_features_per_split = parse_int(key, value);
  else if (key == "runs") runs = parse_int(key, value);
  else if (key == "scenarios") scenarios = split(value, ',');
  else if (key == "real_fractions") {
    real_fractions.clear();
    for (const std::string& f : split(value, ',')) real_fractions.push_back(parse_double(key, f));
  } else if (key == "synth_activities") synth_activities = split(value, ',');
  else if (key == "synth_clips_per_activity") synth_clips_per_activity = parse_int(key, value);
  else if (key == "synth_duration_min_s") synth_duration_min_s = parse_double(key, value);
  else if (key == "synth_duration_max_s") synth_duration_max_s = parse_double(key, value);
  else if (key == "synth_fps") synth_fps = parse_double(key, value);
  else
    throw ConfigError("config: unknown key '" + key + "'");
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open '" + path + "'");
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: '" + path + "' line " + std::to_string(line_no) +
                        ": expected `key = value`");
    try {
      cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(e.what()) + " ('" + path + "' line " +
                        std::to_string(line_no) + ")");
    }
  }
  cfg.validate();
  return cfg;
}

void PipelineConfig::validate() const {
  if (placements.empty()) throw ConfigError("config: no placements");
  if (internal_rate_hz <= 0 || output_rate_hz <= 0 || sample_rate_hz <= 0)
    throw ConfigError("config: rates must be positive");
  if (output_rate_hz > internal_rate_hz)
    throw ConfigError("config: output_rate_hz exceeds internal_rate_hz");
  if (accel_white_sigma < 0 || gyro_white_sigma < 0 || accel_bias_sigma < 0 ||
      gyro_bias_sigma < 0)
    throw ConfigError("config: noise sigmas must be >= 0");
  if (calibration_knots < 2) throw ConfigError("config: calibration_knots must be >= 2");
  if (window_seconds <= 0) throw ConfigError("config: window_seconds must be positive");
  if (window_overlap < 0 || window_overlap >= 1)
    throw ConfigError("config: window_overlap must be in [0, 1)");
  if (ecdf_components < 2) throw ConfigError("config: ecdf_components must be >= 2");
  if (rf_trees < 1) throw ConfigError("config: rf_trees must be >= 1");
  if (rf_min_samples_split < 2) throw ConfigError("config: rf_min_samples_split must be >= 2");
  if (rf_max_depth < 0 || rf_features_per_split < 0)
    throw ConfigError("config: negative forest parameter");
  if (runs < 1) throw ConfigError("config: runs must be >= 1");
  if (scenarios.empty()) throw ConfigError("config: no scenarios");
  for (const std::string& s : scenarios)
    if (s != "real" && s != "virtual" && s != "mixed")
      throw ConfigError("config: unknown scenario '" + s + "'");
  if (real_fractions.empty()) throw ConfigError("config: no real_fractions");
  for (double f : real_fractions)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("config: real_fractions must lie in (0, 1]");
  if (synth_activities.empty()) throw ConfigError("config: no synth_activities");
  if (synth_clips_per_activity < 1)
    throw ConfigError("config: synth_clips_per_activity must be >= 1");
  if (synth_duration_min_s < 1.0 || synth_duration_max_s > 60.0 ||
      synth_duration_min_s > synth_duration_max_s)
    throw ConfigError("config: synth durations must satisfy 1 <= min <= max <= 60");
  if (synth_fps <= 0) throw ConfigError("config: synth_fps must be positive");
}

std::string PipelineConfig::to_text() const {
  std::ostringstream out;
  out << "skeleton = " << skeleton << "\n";
  out << "placements = ";
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const PlacementSpec& p = placements[i];
    if (i) out << ", ";
    out << p.location << ":" << p.joint;
    if (p.mount_rpy_deg.norm() > 0)
      out << ":" << format_double(p.mount_rpy_deg.x()) << ":" << format_double(p.mount_rpy_deg.y())
          << ":" << format_double(p.mount_rpy_deg.z());
  }
  out << "\n";
  out << "internal_rate_hz = " << format_double(internal_rate_hz) << "\n";
  out << "output_rate_hz = " << format_double(output_rate_hz) << "\n";
  out << "sample_rate_hz = " << format_double(sample_rate_hz) << "\n";
  out << "accel_white_sigma = " << format_double(accel_white_sigma) << "\n";
  out << "gyro_white_sigma = " << format_double(gyro_white_sigma) << "\n";
  out << "accel_bias_sigma = " << format_double(accel_bias_sigma) << "\n";
  out << "gyro_bias_sigma = " << format_double(gyro_bias_sigma) << "\n";
  out << "seed = " << seed << "\n";
  out << "calibrate = " << (calibrate ? "true" : "false") << "\n";
  out << "calibration_knots = " << calibration_knots << "\n";
  out << "calibration_per_activity = " << (calibration_per_activity ? "true" : "false") << "\n";
  out << "window_seconds = " << format_double(window_seconds) << "\n";
  out << "window_overlap = " << format_double(window_overlap) << "\n";
  out << "ecdf_components = " << ecdf_components << "\n";
  out << "rf_trees = " << rf_trees << "\n";
  out << "rf_min_samples_split = " << rf_min_samples_split << "\n";
  out << "rf_max_depth = " << rf_max_depth << "\n";
  out << "rf_features_per_split = " << rf_features_per_split << "\n";
  out << "runs = " << runs << "\n";
  out << "scenarios = ";
  for (std::size_t i = 0; i < scenarios.size(); ++i) out << (i ? ", " : "") << scenarios[i];
  out << "\n";
  out << "real_fractions = ";
  for (std::size_t i = 0; i < real_fractions.size(); ++i)
    out << (i ? ", " : "") << format_double(real_fractions[i]);
  out << "\n";
  out << "synth_activities = ";
  for (std::size_t i = 0; i < synth_activities.size(); ++i)
    out << (i ? ", " : "") << synth_activities[i];
  out << "\n";
  out << "synth_clips_per_activity = " << synth_clips_per_activity << "\n";
  out << "synth_duration_min_s = " << format_double(synth_duration_min_s) << "\n";
  out << "synth_duration_max_s = " << format_double(synth_duration_max_s) << "\n";
  out << "synth_fps = " << format_double(synth_fps) << "\n";
  return out.str();
}

Skeleton PipelineConfig::load_skeleton() const {
  return skeleton == "default" ? Skeleton::default22() : Skeleton::load(skeleton);
}

std::vector<SensorPlacement> PipelineConfig::resolve_placements(const Skeleton& skel) const {
  std::vector<SensorPlacement> out;
  for (const PlacementSpec& spec : placements) {
    int idx = skel.find_joint(spec.joint);
    if (idx < 0)
      throw ConfigError("config: placement '" + spec.location + "': no joint named '" +
                        spec.joint + "'");
    SensorPlacement p;
    p.joint_index = idx;
    p.location = spec.location;
    // Mount rotation applied intrinsically: X roll, then Y pitch, then Z yaw.
    Vec3 rad = spec.mount_rpy_deg * (M_PI / 180.0);
    p.mount = quat_multiply(
        quat_multiply(quat_from_axis_angle(Vec3::UnitX(), rad.x()),
                      quat_from_axis_angle(Vec3::UnitY(), rad.y())),
        quat_from_axis_angle(Vec3::UnitZ(), rad.z()));
    out.push_back(std::move(p));
  }
  return out;
}

NoiseParams PipelineConfig::noise_params(std::uint64_t noise_seed) const {
  NoiseParams n;
  n.accel_white_sigma = accel_white_sigma;
  n.gyro_white_sigma = gyro_white_sigma;
  n.accel_bias_sigma = accel_bias_sigma;
  n.gyro_bias_sigma = gyro_bias_sigma;
  n.seed = noise_seed;
  return n;
}

ForestParams PipelineConfig::forest_params() const {
  ForestParams p;
  p.n_trees = rf_trees;
  p.min_samples_split = rf_min_samples_split;
  p.max_depth = rf_max_depth;
  p.n_features_per_split = rf_features_per_split;
  return p;
}

}  // namespace virtimu
