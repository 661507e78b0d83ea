/*
 * virtimu C API: skeleton motion -> virtual on-body IMU data -> calibrated
 * activity-recognition experiments.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return vt_status; on any status other than VT_OK,
 * vt_last_error() carries a human-readable message for the calling thread
 * (valid until the thread's next API call). Pipeline commands stream their
 * resolved plan and progress to stdout.
 *
 * Output determinism: for a fixed config and seed, every file written by the
 * vt_cmd_* functions is byte-identical across runs and thread counts
 * (VIRTIMU_THREADS caps worker threads).
 */
#ifndef VIRTIMU_H
#define VIRTIMU_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VIRTIMU_API __declspec(dllexport)
#else
#define VIRTIMU_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vt_status {
  VT_OK = 0,
  VT_ERR_INVALID_ARGUMENT = 1,
  VT_ERR_IO = 2,
  VT_ERR_PARSE = 3,
  VT_ERR_CONFIG = 4,
  VT_ERR_RUNTIME = 5
} vt_status;

typedef struct vt_skeleton vt_skeleton;
typedef struct vt_motion vt_motion;
typedef struct vt_imu_set vt_imu_set;
typedef struct vt_config vt_config;

VIRTIMU_API const char* vt_version(void);
VIRTIMU_API const char* vt_last_error(void);

/* ---- skeleton ---------------------------------------------------------- */

/* The built-in 22-joint skeleton (SMPL-style layout). */
VIRTIMU_API vt_status vt_skeleton_default(vt_skeleton** out);
/* Text format: one `index name parent_index ox oy oz` line per joint. */
VIRTIMU_API vt_status vt_skeleton_load(const char* path, vt_skeleton** out);
VIRTIMU_API void vt_skeleton_free(vt_skeleton* skeleton);
VIRTIMU_API int vt_skeleton_joint_count(const vt_skeleton* skeleton);
/* NULL when the index is out of range. */
VIRTIMU_API const char* vt_skeleton_joint_name(const vt_skeleton* skeleton, int joint);

/* ---- motion clips ------------------------------------------------------ */

VIRTIMU_API vt_status vt_motion_read(const vt_skeleton* skeleton, const char* path,
                                     vt_motion** out);
VIRTIMU_API vt_status vt_motion_write(const vt_motion* motion, const vt_skeleton* skeleton,
                                      const char* path);
/* activity: walking|running|jumping|sitting|standing|lying. */
VIRTIMU_API vt_status vt_motion_synthesize(const vt_skeleton* skeleton, const char* activity,
                                           double duration_s, double fps, uint64_t style_seed,
                                           vt_motion** out);
VIRTIMU_API void vt_motion_free(vt_motion* motion);
VIRTIMU_API int vt_motion_frame_count(const vt_motion* motion);
VIRTIMU_API int vt_motion_joint_count(const vt_motion* motion);
VIRTIMU_API double vt_motion_frame_rate(const vt_motion* motion);
VIRTIMU_API const char* vt_motion_activity(const vt_motion* motion);
/* Frame-major positions, frame_count * joint_count * 3 doubles. */
VIRTIMU_API vt_status vt_motion_copy_positions(const vt_motion* motion, double* buffer,
                                               size_t buffer_len);

/* ---- virtual imu ------------------------------------------------------- */

/* Full per-clip pipeline: inverse kinematics on the motion, then sensor
 * simulation at the config's placements, rates and noise parameters, with
 * the given noise seed. Result holds one multi-location stream. */
VIRTIMU_API vt_status vt_simulate(const vt_config* cfg, const vt_skeleton* skeleton,
                                  const vt_motion* motion, uint64_t noise_seed,
                                  vt_imu_set** out);
/* is_virtual tags every parsed stream (a CSV carries no source column). */
VIRTIMU_API vt_status vt_imu_read_csv(const char* path, int is_virtual, vt_imu_set** out);
VIRTIMU_API vt_status vt_imu_write_csv(const vt_imu_set* set, const char* path);
VIRTIMU_API void vt_imu_free(vt_imu_set* set);
VIRTIMU_API int vt_imu_stream_count(const vt_imu_set* set);
VIRTIMU_API int vt_imu_sample_count(const vt_imu_set* set, int stream);
VIRTIMU_API double vt_imu_sample_rate(const vt_imu_set* set, int stream);
VIRTIMU_API const char* vt_imu_activity(const vt_imu_set* set, int stream);
VIRTIMU_API const char* vt_imu_subject(const vt_imu_set* set, int stream);
VIRTIMU_API int vt_imu_track_count(const vt_imu_set* set, int stream);
VIRTIMU_API const char* vt_imu_location(const vt_imu_set* set, int stream, int track);
/* sample_count * 3 doubles, sample-major. */
VIRTIMU_API vt_status vt_imu_copy_accel(const vt_imu_set* set, int stream, int track,
                                        double* buffer, size_t buffer_len);
VIRTIMU_API vt_status vt_imu_copy_gyro(const vt_imu_set* set, int stream, int track,
                                       double* buffer, size_t buffer_len);

/* ---- config ------------------------------------------------------------ */

VIRTIMU_API vt_status vt_config_default(vt_config** out);
VIRTIMU_API vt_status vt_config_load(const char* path, vt_config** out);
/* Single `key` override with the config file value syntax. */
VIRTIMU_API vt_status vt_config_set(vt_config* cfg, const char* key, const char* value);
/* Canonical `key = value` dump; owned by the handle, valid until the next
 * vt_config_dump on it. */
VIRTIMU_API const char* vt_config_dump(vt_config* cfg);
VIRTIMU_API void vt_config_free(vt_config* cfg);

/* ---- pipeline commands ------------------------------------------------- */

VIRTIMU_API vt_status vt_cmd_synth(const vt_config* cfg, const char* out_dir, int dry_run);
VIRTIMU_API vt_status vt_cmd_gen_imu(const vt_config* cfg, const char* const* motion_paths,
                                     size_t n_paths, const char* out_dir, int dry_run);
VIRTIMU_API vt_status vt_cmd_calibrate(const vt_config* cfg, const char* virtual_dir,
                                       const char* real_dir, const char* map_out, int dry_run);
VIRTIMU_API vt_status vt_cmd_featurize(const vt_config* cfg, const char* in_dir, int is_virtual,
                                       const char* out_csv, int dry_run);
VIRTIMU_API vt_status vt_cmd_experiment(const vt_config* cfg, const char* real_dir,
                                        const char* virtual_dir, const char* out_dir,
                                        int dry_run);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VIRTIMU_H */
