#include "calibration.hpp"

#include "numerics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace virtimu {

using json = nlohmann::ordered_json;

double ChannelMap::apply(double v) const {
  if (v <= source.front()) return target.front();
  if (v >= source.back()) return target.back();
  auto it = std::upper_bound(source.begin(), source.end(), v);
  std::size_t hi = static_cast<std::size_t>(it - source.begin());
  std::size_t lo = hi - 1;
  double t = (v - source[lo]) / (source[hi] - source[lo]);
  return target[lo] + t * (target[hi] - target[lo]);
}

DistributionMap fit_rank_map(const ChannelSamples& virtual_samples,
                             const ChannelSamples& real_samples, int n_knots) {
  if (n_knots < 2) throw std::invalid_argument("fit_rank_map: n_knots must be >= 2");
  if (virtual_samples.size() != real_samples.size())
    throw std::invalid_argument("fit_rank_map: channel sets differ");

  DistributionMap map;
  map.n_knots = n_knots;
  for (const auto& [name, vsamples] : virtual_samples) {
    auto rit = real_samples.find(name);
    if (rit == real_samples.end())
      throw std::invalid_argument("fit_rank_map: channel '" + name + "' missing on real side");
    const auto& rsamples = rit->second;
    if (vsamples.size() < 2 || rsamples.size() < 2)
      throw std::invalid_argument("fit_rank_map: channel '" + name +
                                  "' needs >= 2 samples on both sides");

    std::vector<double> vsorted(vsamples), rsorted(rsamples);
    std::sort(vsorted.begin(), vsorted.end());
    std::sort(rsorted.begin(), rsorted.end());

    std::vector<double> src(n_knots), tgt(n_knots);
    for (int k = 0; k < n_knots; ++k) {
      double p = static_cast<double>(k) / static_cast<double>(n_knots - 1);
      src[k] = interp_quantile(vsorted, p);
      tgt[k] = interp_quantile(rsorted, p);
    }

    // Merge tied source knots, averaging their targets, so apply() never
    // divides by a zero-width interval.
    ChannelMap cm;
    std::size_t i = 0;
    while (i < src.size()) {
      std::size_t j = i;
      double sum = 0.0;
      while (j < src.size() && src[j] == src[i]) sum += tgt[j++];
      cm.source.push_back(src[i]);
      cm.target.push_back(sum / static_cast<double>(j - i));
      i = j;
    }
    if (cm.source.size() < 2) {
      // Constant source channel: keep a flat two-knot map.
      cm.source.push_back(cm.source.back());
      cm.source.back() += 1.0;
      cm.target.push_back(cm.target.back());
    }
    map.channels.emplace(name, std::move(cm));
  }
  return map;
}

ImuStream apply_rank_map(const DistributionMap& map, const ImuStream& stream) {
  ImuStream out = stream;
  static const char* axes[3] = {"x", "y", "z"};
  for (SensorTrack& track : out.tracks) {
    for (int a = 0; a < 3; ++a) {
      auto it = map.channels.find(track.location + ".a" + axes[a]);
      if (it == map.channels.end())
        throw std::invalid_argument("apply_rank_map: no map for channel '" + track.location +
                                    ".a" + axes[a] + "'");
      for (Vec3& v : track.accel) v[a] = it->second.apply(v[a]);
    }
    if (track.has_gyro()) {
      for (int a = 0; a < 3; ++a) {
        auto it = map.channels.find(track.location + ".g" + axes[a]);
        if (it == map.channels.end())
          throw std::invalid_argument("apply_rank_map: no map for channel '" + track.location +
                                      ".g" + axes[a] + "'");
        for (Vec3& v : track.gyro) v[a] = it->second.apply(v[a]);
      }
    }
  }
  return out;
}

void apply_rank_map(const DistributionMap& map, const std::vector<std::string>& names,
                    std::span<double> samples) {
  std::size_t c = names.size();
  if (c == 0 || samples.size() % c != 0)
    throw std::invalid_argument("apply_rank_map: sample block does not match channel names");
  std::vector<const ChannelMap*> maps(c);
  for (std::size_t i = 0; i < c; ++i) {
    auto it = map.channels.find(names[i]);
    if (it == map.channels.end())
      throw std::invalid_argument("apply_rank_map: no map for channel '" + names[i] + "'");
    maps[i] = &it->second;
  }
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = maps[i % c]->apply(samples[i]);
}

const DistributionMap& CalibrationModel::select(const std::string& activity) const {
  auto it = per_activity.find(activity);
  return it == per_activity.end() ? global : it->second;
}

namespace {

json map_to_json(const DistributionMap& map) {
  json channels = json::object();
  for (const auto& [name, cm] : map.channels)
    channels[name] = {{"source", cm.source}, {"target", cm.target}};
  return {{"n_knots", map.n_knots}, {"channels", channels}};
}

DistributionMap map_from_json(const json& j) {
  DistributionMap map;
  map.n_knots = j.at("n_knots").get<int>();
  for (const auto& [name, cj] : j.at("channels").items()) {
    ChannelMap cm;
    cm.source = cj.at("source").get<std::vector<double>>();
    cm.target = cj.at("target").get<std::vector<double>>();
    if (cm.source.size() != cm.target.size() || cm.source.size() < 2)
      throw ParseError("calibration: channel '" + name + "' has malformed knots");
    if (!std::is_sorted(cm.source.begin(), cm.source.end()) ||
        !std::is_sorted(cm.target.begin(), cm.target.end()))
      throw ParseError("calibration: channel '" + name + "' knots not sorted");
    map.channels.emplace(name, std::move(cm));
  }
  return map;
}

}  // namespace

std::string calibration_to_json(const CalibrationModel& model) {
  json j;
  j["format_version"] = 1;
  j["global"] = map_to_json(model.global);
  json per = json::object();
  for (const auto& [activity, map] : model.per_activity) per[activity] = map_to_json(map);
  j["per_activity"] = per;
  return j.dump(2) + "\n";
}

CalibrationModel calibration_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("calibration: invalid JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1)
      throw ParseError("calibration: unsupported format_version");
    CalibrationModel model;
    model.global = map_from_json(j.at("global"));
    for (const auto& [activity, mj] : j.at("per_activity").items())
      model.per_activity.emplace(activity, map_from_json(mj));
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("calibration: missing or mistyped field: ") + e.what());
  }
}

void save_calibration(const CalibrationModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("calibration: cannot write '" + path + "'");
  out << calibration_to_json(model);
  if (!out) throw IoError("calibration: write failed for '" + path + "'");
}

CalibrationModel load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("calibration: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return calibration_from_json(ss.str());
}

}  // namespace virtimu
