#include "imu_stream.hpp"

namespace virtimu {

void ImuStream::validate() const {
  if (sample_rate <= 0.0) throw std::invalid_argument("imu stream: sample rate must be positive");
  std::size_t n = sample_count();
  for (const SensorTrack& t : tracks) {
    if (t.accel.size() != n)
      throw std::invalid_argument("imu stream: track '" + t.location +
                                  "' length differs from the first track");
    if (!t.gyro.empty() && t.gyro.size() != n)
      throw std::invalid_argument("imu stream: track '" + t.location +
                                  "' gyro/accel lengths differ");
    for (const Vec3& v : t.accel)
      if (!v.allFinite()) throw std::invalid_argument("imu stream: non-finite accel value");
    for (const Vec3& v : t.gyro)
      if (!v.allFinite()) throw std::invalid_argument("imu stream: non-finite gyro value");
  }
}

std::vector<std::string> channel_names(const ImuStream& stream) {
  static const char* axes[3] = {"x", "y", "z"};
  std::vector<std::string> names;
  for (const SensorTrack& t : stream.tracks) {
    for (const char* ax : axes) names.push_back(t.location + ".a" + ax);
    if (t.has_gyro())
      for (const char* ax : axes) names.push_back(t.location + ".g" + ax);
  }
  return names;
}

ImuStream select_accel_channels(const ImuStream& stream, Diagnostics* diag) {
  ImuStream out = stream;
  for (SensorTrack& t : out.tracks) t.gyro.clear();
  if (out.tracks.empty()) diag_warn(diag, "select_accel_channels: stream has no placements");
  return out;
}

ImuStream merge_locations(std::span<const ImuStream> parts,
                          const std::vector<std::string>& location_order) {
  if (parts.empty()) throw std::invalid_argument("merge_locations: no streams");
  ImuStream out;
  out.sample_rate = parts[0].sample_rate;
  out.activity = parts[0].activity;
  out.subject = parts[0].subject;
  out.source = parts[0].source;
  for (const std::string& loc : location_order) {
    const ImuStream* found = nullptr;
    for (const ImuStream& p : parts) {
      if (p.tracks.size() == 1 && p.tracks[0].location == loc) {
        found = &p;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument("merge_locations: location '" + loc +
                                  "' missing from recording (subject '" + out.subject +
                                  "', activity '" + out.activity + "')");
    if (found->subject != out.subject || found->activity != out.activity)
      throw std::invalid_argument("merge_locations: streams belong to different recordings");
    if (std::abs(found->sample_rate - out.sample_rate) > 1e-9 * out.sample_rate)
      throw std::invalid_argument("merge_locations: mixed sample rates in one recording");
    if (found->sample_count() != parts[0].sample_count())
      throw std::invalid_argument("merge_locations: location '" + loc +
                                  "' length differs within recording");
    out.tracks.push_back(found->tracks[0]);
  }
  return out;
}

double channel_value(const ImuStream& stream, std::size_t channel, std::size_t sample) {
  for (const SensorTrack& t : stream.tracks) {
    if (channel < 3) return t.accel[sample][channel];
    channel -= 3;
    if (t.has_gyro()) {
      if (channel < 3) return t.gyro[sample][channel];
      channel -= 3;
    }
  }
  throw std::invalid_argument("channel_value: channel index out of range");
}

}  // namespace virtimu
