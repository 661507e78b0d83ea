#include "motion_file.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace virtimu {

using json = nlohmann::ordered_json;

MotionSequence read_motion_file(const std::string& path, const Skeleton& skeleton) {
  std::ifstream in(path);
  if (!in) throw IoError("motion: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("motion: '" + path + "' is not valid JSON: " + e.what());
  }

  try {
    if (j.at("format_version").get<int>() != 1)
      throw ParseError("motion: '" + path + "': unsupported format_version " +
                       j.at("format_version").dump());

    const json& names = j.at("joint_names");
    if (names.size() != skeleton.joint_count())
      throw ParseError("motion: '" + path + "': " + std::to_string(names.size()) +
                       " joints, skeleton has " + std::to_string(skeleton.joint_count()));
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i].get<std::string>() != skeleton.joint(i).name)
        throw ParseError("motion: '" + path + "': joint " + std::to_string(i) + " is '" +
                         names[i].get<std::string>() + "', skeleton expects '" +
                         skeleton.joint(i).name + "'");

    MotionSequence motion;
    motion.frame_rate = j.at("frame_rate_hz").get<double>();
    motion.joint_count = skeleton.joint_count();
    const json& frames = j.at("frames");
    motion.positions.reserve(frames.size() * motion.joint_count);
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const json& frame = frames[t];
      if (frame.size() != motion.joint_count)
        throw ParseError("motion: '" + path + "': frame " + std::to_string(t) + " has " +
                         std::to_string(frame.size()) + " joints (ragged)");
      for (const json& p : frame) {
        if (!p.is_array() || p.size() != 3)
          throw ParseError("motion: '" + path + "': frame " + std::to_string(t) +
                           " has a malformed joint position");
        motion.positions.emplace_back(p[0].get<double>(), p[1].get<double>(),
                                      p[2].get<double>());
      }
    }
    if (j.contains("activity")) motion.activity = j["activity"].get<std::string>();
    if (j.contains("subject")) motion.subject = j["subject"].get<std::string>();
    if (j.contains("prompt")) motion.prompt = j["prompt"].get<std::string>();
    validate_motion(skeleton, motion);
    return motion;
  } catch (const json::exception& e) {
    throw ParseError("motion: '" + path + "': missing or mistyped field: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError("motion: '" + path + "': " + e.what());
  }
}

void write_motion_file(const MotionSequence& motion, const Skeleton& skeleton,
                       const std::string& path) {
  validate_motion(skeleton, motion);
  json j;
  j["format_version"] = 1;
  j["frame_rate_hz"] = motion.frame_rate;
  json names = json::array();
  for (const JointDef& joint : skeleton.joints()) names.push_back(joint.name);
  j["joint_names"] = std::move(names);
  json frames = json::array();
  for (std::size_t t = 0; t < motion.frame_count(); ++t) {
    json frame = json::array();
    for (std::size_t jo = 0; jo < motion.joint_count; ++jo) {
      const Vec3& p = motion.at(t, jo);
      frame.push_back({p.x(), p.y(), p.z()});
    }
    frames.push_back(std::move(frame));
  }
  j["frames"] = std::move(frames);
  if (!motion.activity.empty()) j["activity"] = motion.activity;
  if (!motion.subject.empty()) j["subject"] = motion.subject;
  if (!motion.prompt.empty()) j["prompt"] = motion.prompt;

  std::ofstream out(path);
  if (!out) throw IoError("motion: cannot write '" + path + "'");
  out << j.dump() << "\n";
  if (!out) throw IoError("motion: write failed for '" + path + "'");
}

}  // namespace virtimu
