#pragma once

#include "config.hpp"
#include "errors.hpp"
#include "features.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace virtimu {

/// Command implementations behind the CLI subcommands. All of them print a
/// resolved plan (stages, file counts, seeds) to `out` and stop there when
/// dry_run is set; outputs are byte-deterministic for a fixed config and
/// seed, independent of VIRTIMU_THREADS.

/// Writes one motion JSON per (activity, clip); durations are drawn from the
/// configured range per clip, styles vary per clip, all from the config seed.
void cmd_synth(const PipelineConfig& cfg, const std::string& out_dir, bool dry_run,
               std::ostream& out, Diagnostics* diag = nullptr);

/// Motion files -> inverse kinematics -> virtual IMU CSVs (one per clip,
/// source=virtual), with per-clip noise seeds derived from the config seed.
void cmd_gen_imu(const PipelineConfig& cfg, const std::vector<std::string>& motion_paths,
                 const std::string& out_dir, bool dry_run, std::ostream& out,
                 Diagnostics* diag = nullptr);

/// Fits the rank map (global + per-activity) from the virtual CSV directory
/// onto the real CSV directory and writes it as JSON.
void cmd_calibrate(const PipelineConfig& cfg, const std::string& virtual_dir,
                   const std::string& real_dir, const std::string& map_out, bool dry_run,
                   std::ostream& out, Diagnostics* diag = nullptr);

/// CSV directory -> downsample -> accel-only -> windows -> ECDF feature CSV.
void cmd_featurize(const PipelineConfig& cfg, const std::string& in_dir, Source source,
                   const std::string& out_csv, bool dry_run, std::ostream& out,
                   Diagnostics* diag = nullptr);

/// Full evaluation: downsample -> accel-only -> per-fold calibration ->
/// windows -> features -> LOSO over every configured scenario and real
/// fraction. Writes per-(scenario, fraction) report CSVs, summary.json and a
/// gnuplot-ready curve.dat into out_dir.
void cmd_experiment(const PipelineConfig& cfg, const std::string& real_dir,
                    const std::string& virtual_dir, const std::string& out_dir, bool dry_run,
                    std::ostream& out, Diagnostics* diag = nullptr);

/// Sorted *.csv paths in a directory (non-recursive).
std::vector<std::string> list_csv_files(const std::string& dir);

/// Reads every CSV in a directory, downsamples to the config rate, keeps
/// accelerometer channels, merges the configured locations per recording and
/// segments windows. Used by cmd_experiment and tests.
WindowedDataset load_windows(const PipelineConfig& cfg, const std::string& dir, Source source,
                             Diagnostics* diag = nullptr);

}  // namespace virtimu
