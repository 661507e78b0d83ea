#include "virtimu/virtimu.h"

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/imu_csv.hpp"
#include "core/imu_stream.hpp"
#include "core/kinematics.hpp"
#include "core/model.hpp"
#include "core/motion_file.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"
#include "core/sensorsim.hpp"
#include "core/synth.hpp"

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

using namespace virtimu;

struct vt_skeleton {
  Skeleton impl;
};
struct vt_motion {
  MotionSequence impl;
};
struct vt_imu_set {
  std::vector<ImuStream> streams;
};
struct vt_config {
  PipelineConfig impl;
  std::string dump;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
vt_status guarded(Fn&& fn) {
  try {
    fn();
    return VT_OK;
  } catch (const ConfigError& e) {
    set_error(e.what());
    return VT_ERR_CONFIG;
  } catch (const ParseError& e) {
    set_error(e.what());
    return VT_ERR_PARSE;
  } catch (const IoError& e) {
    set_error(e.what());
    return VT_ERR_IO;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return VT_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return VT_ERR_RUNTIME;
  }
}

vt_status require(bool ok, const char* message) {
  if (ok) return VT_OK;
  set_error(message);
  return VT_ERR_INVALID_ARGUMENT;
}

const ImuStream* stream_at(const vt_imu_set* set, int stream) {
  if (!set || stream < 0 || stream >= static_cast<int>(set->streams.size())) return nullptr;
  return &set->streams[stream];
}

const SensorTrack* track_at(const vt_imu_set* set, int stream, int track) {
  const ImuStream* s = stream_at(set, stream);
  if (!s || track < 0 || track >= static_cast<int>(s->tracks.size())) return nullptr;
  return &s->tracks[track];
}

vt_status copy_samples(const std::vector<Vec3>& samples, double* buffer, size_t buffer_len) {
  vt_status st = require(buffer != nullptr, "null buffer");
  if (st != VT_OK) return st;
  if (buffer_len < samples.size() * 3) {
    set_error("buffer too small: need " + std::to_string(samples.size() * 3) + " doubles");
    return VT_ERR_INVALID_ARGUMENT;
  }
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (int a = 0; a < 3; ++a) buffer[i * 3 + a] = samples[i][a];
  return VT_OK;
}

}  // namespace

extern "C" {

const char* vt_version(void) { return "0.1.0"; }

const char* vt_last_error(void) { return g_last_error.c_str(); }

/* ---- skeleton ---------------------------------------------------------- */

vt_status vt_skeleton_default(vt_skeleton** out) {
  if (vt_status st = require(out != nullptr, "null output pointer"); st != VT_OK) return st;
  return guarded([&] { *out = new vt_skeleton{Skeleton::default22()}; });
}

vt_status vt_skeleton_load(const char* path, vt_skeleton** out) {
  if (vt_status st = require(path && out, "null argument"); st != VT_OK) return st;
  return guarded([&] { *out = new vt_skeleton{Skeleton::load(path)}; });
}

void vt_skeleton_free(vt_skeleton* skeleton) { delete skeleton; }

int vt_skeleton_joint_count(const vt_skeleton* skeleton) {
  return skeleton ? static_cast<int>(skeleton->impl.joint_count()) : 0;
}

const char* vt_skeleton_joint_name(const vt_skeleton* skeleton, int joint) {
  if (!skeleton || joint < 0 || joint >= static_cast<int>(skeleton->impl.joint_count()))
    return nullptr;
  return skeleton->impl.joint(joint).name.c_str();
}

/* ---- motion clips ------------------------------------------------------ */

vt_status vt_motion_read(const vt_skeleton* skeleton, const char* path, vt_motion** out) {
  if (vt_status st = require(skeleton && path && out, "null argument"); st != VT_OK) return st;
  return guarded([&] { *out = new vt_motion{read_motion_file(path, skeleton->impl)}; });
}

vt_status vt_motion_write(const vt_motion* motion, const vt_skeleton* skeleton,
                          const char* path) {
  if (vt_status st = require(motion && skeleton && path, "null argument"); st != VT_OK) return st;
  return guarded([&] { write_motion_file(motion->impl, skeleton->impl, path); });
}

vt_status vt_motion_synthesize(const vt_skeleton* skeleton, const char* activity,
                               double duration_s, double fps, uint64_t style_seed,
                               vt_motion** out) {
  if (vt_status st = require(skeleton && activity && out, "null argument"); st != VT_OK)
    return st;
  return guarded([&] {
    *out = new vt_motion{
        generate_synthetic_motion(skeleton->impl, activity, duration_s, style_seed, fps)};
  });
}

void vt_motion_free(vt_motion* motion) { delete motion; }

int vt_motion_frame_count(const vt_motion* motion) {
  return motion ? static_cast<int>(motion->impl.frame_count()) : 0;
}

int vt_motion_joint_count(const vt_motion* motion) {
  return motion ? static_cast<int>(motion->impl.joint_count) : 0;
}

double vt_motion_frame_rate(const vt_motion* motion) {
  return motion ? motion->impl.frame_rate : 0.0;
}

const char* vt_motion_activity(const vt_motion* motion) {
  return motion ? motion->impl.activity.c_str() : nullptr;
}

vt_status vt_motion_copy_positions(const vt_motion* motion, double* buffer, size_t buffer_len) {
  if (vt_status st = require(motion && buffer, "null argument"); st != VT_OK) return st;
  std::size_t needed = motion->impl.positions.size() * 3;
  if (buffer_len < needed) {
    set_error("buffer too small: need " + std::to_string(needed) + " doubles");
    return VT_ERR_INVALID_ARGUMENT;
  }
  for (std::size_t i = 0; i < motion->impl.positions.size(); ++i)
    for (int a = 0; a < 3; ++a) buffer[i * 3 + a] = motion->impl.positions[i][a];
  return VT_OK;
}

/* ---- virtual imu ------------------------------------------------------- */

vt_status vt_simulate(const vt_config* cfg, const vt_skeleton* skeleton, const vt_motion* motion,
                      uint64_t noise_seed, vt_imu_set** out) {
  if (vt_status st = require(cfg && skeleton && motion && out, "null argument"); st != VT_OK)
    return st;
  return guarded([&] {
    const PipelineConfig& c = cfg->impl;
    c.validate();
    PoseTrajectory pose = inverse_kinematics(skeleton->impl, motion->impl);
    ImuStream stream =
        simulate_imu(skeleton->impl, pose, c.resolve_placements(skeleton->impl),
                     c.output_rate_hz, c.noise_params(noise_seed), c.internal_rate_hz);
    stream.activity = motion->impl.activity;
    stream.subject = motion->impl.subject;
    *out = new vt_imu_set{{std::move(stream)}};
  });
}

vt_status vt_imu_read_csv(const char* path, int is_virtual, vt_imu_set** out) {
  if (vt_status st = require(path && out, "null argument"); st != VT_OK) return st;
  return guarded([&] {
    *out = new vt_imu_set{read_imu_csv(path, is_virtual ? Source::Virtual : Source::Real)};
  });
}

vt_status vt_imu_write_csv(const vt_imu_set* set, const char* path) {
  if (vt_status st = require(set && path, "null argument"); st != VT_OK) return st;
  return guarded([&] { write_imu_csv(set->streams, path); });
}

void vt_imu_free(vt_imu_set* set) { delete set; }

int vt_imu_stream_count(const vt_imu_set* set) {
  return set ? static_cast<int>(set->streams.size()) : 0;
}

int vt_imu_sample_count(const vt_imu_set* set, int stream) {
  const ImuStream* s = stream_at(set, stream);
  return s ? static_cast<int>(s->sample_count()) : 0;
}

double vt_imu_sample_rate(const vt_imu_set* set, int stream) {
  const ImuStream* s = stream_at(set, stream);
  return s ? s->sample_rate : 0.0;
}

const char* vt_imu_activity(const vt_imu_set* set, int stream) {
  const ImuStream* s = stream_at(set, stream);
  return s ? s->activity.c_str() : nullptr;
}

const char* vt_imu_subject(const vt_imu_set* set, int stream) {
  const ImuStream* s = stream_at(set, stream);
  return s ? s->subject.c_str() : nullptr;
}

int vt_imu_track_count(const vt_imu_set* set, int stream) {
  const ImuStream* s = stream_at(set, stream);
  return s ? static_cast<int>(s->tracks.size()) : 0;
}

const char* vt_imu_location(const vt_imu_set* set, int stream, int track) {
  const SensorTrack* t = track_at(set, stream, track);
  return t ? t->location.c_str() : nullptr;
}

vt_status vt_imu_copy_accel(const vt_imu_set* set, int stream, int track, double* buffer,
                            size_t buffer_len) {
  const SensorTrack* t = track_at(set, stream, track);
  if (vt_status st = require(t != nullptr, "stream or track index out of range"); st != VT_OK)
    return st;
  return copy_samples(t->accel, buffer, buffer_len);
}

vt_status vt_imu_copy_gyro(const vt_imu_set* set, int stream, int track, double* buffer,
                           size_t buffer_len) {
  const SensorTrack* t = track_at(set, stream, track);
  if (vt_status st = require(t != nullptr, "stream or track index out of range"); st != VT_OK)
    return st;
  if (vt_status st = require(t->has_gyro(), "track has no gyro channels"); st != VT_OK) return st;
  return copy_samples(t->gyro, buffer, buffer_len);
}

/* ---- config ------------------------------------------------------------ */

vt_status vt_config_default(vt_config** out) {
  if (vt_status st = require(out != nullptr, "null output pointer"); st != VT_OK) return st;
  return guarded([&] { *out = new vt_config{}; });
}

vt_status vt_config_load(const char* path, vt_config** out) {
  if (vt_status st = require(path && out, "null argument"); st != VT_OK) return st;
  return guarded([&] { *out = new vt_config{PipelineConfig::load(path), {}}; });
}

vt_status vt_config_set(vt_config* cfg, const char* key, const char* value) {
  if (vt_status st = require(cfg && key && value, "null argument"); st != VT_OK) return st;
  return guarded([&] { cfg->impl.set(key, value); });
}

const char* vt_config_dump(vt_config* cfg) {
  if (!cfg) return nullptr;
  cfg->dump = cfg->impl.to_text();
  return cfg->dump.c_str();
}

void vt_config_free(vt_config* cfg) { delete cfg; }

/* ---- pipeline commands ------------------------------------------------- */

vt_status vt_cmd_synth(const vt_config* cfg, const char* out_dir, int dry_run) {
  if (vt_status st = require(cfg && out_dir, "null argument"); st != VT_OK) return st;
  return guarded([&] { cmd_synth(cfg->impl, out_dir, dry_run != 0, std::cout); });
}

vt_status vt_cmd_gen_imu(const vt_config* cfg, const char* const* motion_paths, size_t n_paths,
                         const char* out_dir, int dry_run) {
  if (vt_status st = require(cfg && out_dir && (motion_paths || n_paths == 0), "null argument");
      st != VT_OK)
    return st;
  return guarded([&] {
    std::vector<std::string> paths(motion_paths, motion_paths + n_paths);
    cmd_gen_imu(cfg->impl, paths, out_dir, dry_run != 0, std::cout);
  });
}

vt_status vt_cmd_calibrate(const vt_config* cfg, const char* virtual_dir, const char* real_dir,
                           const char* map_out, int dry_run) {
  if (vt_status st = require(cfg && virtual_dir && real_dir && map_out, "null argument");
      st != VT_OK)
    return st;
  return guarded(
      [&] { cmd_calibrate(cfg->impl, virtual_dir, real_dir, map_out, dry_run != 0, std::cout); });
}

vt_status vt_cmd_featurize(const vt_config* cfg, const char* in_dir, int is_virtual,
                           const char* out_csv, int dry_run) {
  if (vt_status st = require(cfg && in_dir && out_csv, "null argument"); st != VT_OK) return st;
  return guarded([&] {
    cmd_featurize(cfg->impl, in_dir, is_virtual ? Source::Virtual : Source::Real, out_csv,
                  dry_run != 0, std::cout);
  });
}

vt_status vt_cmd_experiment(const vt_config* cfg, const char* real_dir, const char* virtual_dir,
                            const char* out_dir, int dry_run) {
  if (vt_status st = require(cfg && real_dir && out_dir, "null argument"); st != VT_OK) return st;
  return guarded([&] {
    cmd_experiment(cfg->impl, real_dir, virtual_dir ? virtual_dir : "", out_dir, dry_run != 0,
                   std::cout);
  });
}

} /* extern "C" */
