#include "pipeline.hpp"

#include "calibration.hpp"
#include "experiment.hpp"
#include "imu_csv.hpp"
#include "kinematics.hpp"
#include "motion_file.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sensorsim.hpp"
#include "synth.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <set>

namespace fs = std::filesystem;

namespace virtimu {

namespace {

std::string fraction_tag(double f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", f);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

void require_dir(const std::string& dir, const std::string& what) {
  if (dir.empty()) throw ConfigError(what + " directory not set");
  if (!fs::is_directory(dir)) throw ConfigError(what + " directory '" + dir + "' does not exist");
}

struct RecordingKey {
  std::string subject, activity;
  bool operator<(const RecordingKey& o) const {
    return subject != o.subject ? subject < o.subject : activity < o.activity;
  }
};

}  // namespace

std::vector<std::string> list_csv_files(const std::string& dir) {
  require_dir(dir, "input");
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  return paths;
}

WindowedDataset load_windows(const PipelineConfig& cfg, const std::string& dir, Source source,
                             Diagnostics* diag) {
  std::vector<std::string> paths = list_csv_files(dir);
  if (paths.empty()) throw ConfigError("no .csv files in '" + dir + "'");

  std::vector<std::string> locations;
  for (const PlacementSpec& p : cfg.placements) locations.push_back(p.location);

  WindowedDataset dataset;
  for (const std::string& path : paths) {
    std::vector<ImuStream> streams = read_imu_csv(path, source);
    for (ImuStream& s : streams) {
      if (s.sample_rate < cfg.sample_rate_hz * (1.0 - 1e-9))
        throw ParseError("imu csv: '" + path + "': stream at " +
                         std::to_string(s.sample_rate) + " Hz is below the configured " +
                         std::to_string(cfg.sample_rate_hz) + " Hz");
      s = select_accel_channels(downsample(s, cfg.sample_rate_hz), diag);
    }
    // One recording per (subject, activity) within a file; all configured
    // locations must be present in the same file.
    std::vector<RecordingKey> order;
    std::map<RecordingKey, std::vector<ImuStream>> recordings;
    for (ImuStream& s : streams) {
      RecordingKey key{s.subject, s.activity};
      if (!recordings.count(key)) order.push_back(key);
      recordings[key].push_back(std::move(s));
    }
    for (const RecordingKey& key : order) {
      ImuStream merged;
      try {
        merged = merge_locations(recordings[key], locations);
      } catch (const std::invalid_argument& e) {
        throw ParseError("imu csv: '" + path + "': " + e.what());
      }
      dataset.append(segment_windows(merged, cfg.window_seconds, cfg.window_overlap, diag));
    }
  }
  return dataset;
}

void cmd_synth(const PipelineConfig& cfg, const std::string& out_dir, bool dry_run,
               std::ostream& out, Diagnostics* diag) {
  cfg.validate();
  if (out_dir.empty()) throw ConfigError("synth: output directory not set");
  Skeleton skeleton = cfg.load_skeleton();

  std::size_t total = cfg.synth_activities.size() *
                      static_cast<std::size_t>(cfg.synth_clips_per_activity);
  out << "plan: synth\n"
      << "  activities: " << cfg.synth_activities.size() << ", clips per activity: "
      << cfg.synth_clips_per_activity << ", total clips: " << total << "\n"
      << "  duration range: [" << cfg.synth_duration_min_s << ", " << cfg.synth_duration_max_s
      << "] s at " << cfg.synth_fps << " fps\n"
      << "  seed: " << cfg.seed << "\n"
      << "  output: " << out_dir << "\n";
  if (dry_run) return;

  ensure_dir(out_dir);
  struct Task {
    std::string activity;
    int clip;
    std::uint64_t a_idx;
  };
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < cfg.synth_activities.size(); ++a)
    for (int c = 0; c < cfg.synth_clips_per_activity; ++c)
      tasks.push_back({cfg.synth_activities[a], c, a});

  parallel_for(tasks.size(), [&](std::size_t i) {
    const Task& task = tasks[i];
    Rng rng = make_rng(derive_seed(cfg.seed, seed_tag("synth-duration"), task.a_idx,
                                   static_cast<std::uint64_t>(task.clip)));
    std::uniform_real_distribution<double> dur(cfg.synth_duration_min_s, cfg.synth_duration_max_s);
    double duration = dur(rng);
    std::uint64_t style = derive_seed(cfg.seed, seed_tag("synth-clip"), task.a_idx,
                                      static_cast<std::uint64_t>(task.clip));
    MotionSequence motion =
        generate_synthetic_motion(skeleton, task.activity, duration, style, cfg.synth_fps);
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%03d.json", task.activity.c_str(), task.clip);
    write_motion_file(motion, skeleton, (fs::path(out_dir) / name).string());
  });
  out << "wrote " << tasks.size() << " motion files\n";
}

void cmd_gen_imu(const PipelineConfig& cfg, const std::vector<std::string>& motion_paths,
                 const std::string& out_dir, bool dry_run, std::ostream& out, Diagnostics* diag) {
  cfg.validate();
  if (motion_paths.empty()) throw ConfigError("gen-imu: no inputs");
  if (out_dir.empty()) throw ConfigError("gen-imu: output directory not set");

  std::vector<std::string> paths(motion_paths);
  std::sort(paths.begin(), paths.end());

  Skeleton skeleton = cfg.load_skeleton();
  std::vector<SensorPlacement> placements = cfg.resolve_placements(skeleton);

  out << "plan: gen-imu\n"
      << "  motion files: " << paths.size() << "\n"
      << "  placements: ";
  for (std::size_t i = 0; i < placements.size(); ++i)
    out << (i ? ", " : "") << placements[i].location;
  out << "\n"
      << "  rates: internal " << cfg.internal_rate_hz << " Hz -> output " << cfg.output_rate_hz
      << " Hz\n"
      << "  noise: accel w=" << cfg.accel_white_sigma << " b=" << cfg.accel_bias_sigma
      << ", gyro w=" << cfg.gyro_white_sigma << " b=" << cfg.gyro_bias_sigma << "\n"
      << "  seed: " << cfg.seed << "\n"
      << "  output: " << out_dir << "\n";
  if (dry_run) return;

  ensure_dir(out_dir);
  Diagnostics all_diags;
  std::mutex diag_mutex;
  parallel_for(paths.size(), [&](std::size_t i) {
    Diagnostics local;
    MotionSequence motion = read_motion_file(paths[i], skeleton);
    PoseTrajectory pose = inverse_kinematics(skeleton, motion, &local);
    NoiseParams noise = cfg.noise_params(derive_seed(cfg.seed, seed_tag("clip-noise"), i));
    ImuStream stream = simulate_imu(skeleton, pose, placements, cfg.output_rate_hz, noise,
                                    cfg.internal_rate_hz, &local);
    stream.activity = motion.activity;
    stream.subject = motion.subject;
    stream.source = Source::Virtual;
    std::string name = fs::path(paths[i]).stem().string() + ".csv";
    write_imu_csv({stream}, (fs::path(out_dir) / name).string());
    if (!local.items.empty()) {
      std::lock_guard<std::mutex> lock(diag_mutex);
      for (auto& item : local.items)
        all_diags.items.push_back({item.severity, paths[i] + ": " + item.message});
    }
  });
  if (diag) diag->items.insert(diag->items.end(), all_diags.items.begin(), all_diags.items.end());
  out << "wrote " << paths.size() << " imu csv files\n";
}

namespace {

/// Per-channel samples (and per-activity splits) over single-location
/// streams, after downsample + accel selection.
void gather_samples(const std::vector<ImuStream>& streams, ChannelSamples& global,
                    std::map<std::string, ChannelSamples>& per_activity) {
  static const char* axes[3] = {"x", "y", "z"};
  for (const ImuStream& s : streams) {
    for (const SensorTrack& t : s.tracks) {
      for (int a = 0; a < 3; ++a) {
        std::string name = t.location + ".a" + axes[a];
        auto& g = global[name];
        auto& p = per_activity[s.activity][name];
        for (const Vec3& v : t.accel) {
          g.push_back(v[a]);
          p.push_back(v[a]);
        }
      }
    }
  }
}

}  // namespace

void cmd_calibrate(const PipelineConfig& cfg, const std::string& virtual_dir,
                   const std::string& real_dir, const std::string& map_out, bool dry_run,
                   std::ostream& out, Diagnostics* diag) {
  cfg.validate();
  require_dir(virtual_dir, "virtual");
  require_dir(real_dir, "real");
  if (map_out.empty()) throw ConfigError("calibrate: output path not set");

  std::vector<std::string> vpaths = list_csv_files(virtual_dir);
  std::vector<std::string> rpaths = list_csv_files(real_dir);
  if (vpaths.empty()) throw ConfigError("calibrate: no .csv files in '" + virtual_dir + "'");
  if (rpaths.empty()) throw ConfigError("calibrate: no .csv files in '" + real_dir + "'");

  out << "plan: calibrate\n"
      << "  virtual files: " << vpaths.size() << ", real files: " << rpaths.size() << "\n"
      << "  knots: " << cfg.calibration_knots
      << ", per-activity: " << (cfg.calibration_per_activity ? "true" : "false") << "\n"
      << "  output: " << map_out << "\n";
  if (dry_run) return;

  auto load_side = [&](const std::vector<std::string>& paths, Source source) {
    std::vector<ImuStream> all;
    for (const std::string& p : paths)
      for (ImuStream& s : read_imu_csv(p, source))
        all.push_back(select_accel_channels(downsample(s, cfg.sample_rate_hz), diag));
    return all;
  };
  std::vector<ImuStream> virt = load_side(vpaths, Source::Virtual);
  std::vector<ImuStream> real = load_side(rpaths, Source::Real);

  ChannelSamples vglobal, rglobal;
  std::map<std::string, ChannelSamples> vact, ract;
  gather_samples(virt, vglobal, vact);
  gather_samples(real, rglobal, ract);

  CalibrationModel model;
  model.global = fit_rank_map(vglobal, rglobal, cfg.calibration_knots);
  if (cfg.calibration_per_activity) {
    for (const auto& [activity, vsamples] : vact) {
      auto rit = ract.find(activity);
      if (rit == ract.end()) {
        diag_info(diag, "calibrate: activity '" + activity +
                            "' has no real data; global map will apply");
        continue;
      }
      model.per_activity.emplace(activity,
                                 fit_rank_map(vsamples, rit->second, cfg.calibration_knots));
    }
  }
  save_calibration(model, map_out);
  out << "wrote calibration map with " << model.global.channels.size() << " channels and "
      << model.per_activity.size() << " per-activity maps\n";
}

void cmd_featurize(const PipelineConfig& cfg, const std::string& in_dir, Source source,
                   const std::string& out_csv, bool dry_run, std::ostream& out,
                   Diagnostics* diag) {
  cfg.validate();
  require_dir(in_dir, "input");
  if (out_csv.empty()) throw ConfigError("featurize: output path not set");
  std::vector<std::string> paths = list_csv_files(in_dir);
  if (paths.empty()) throw ConfigError("featurize: no .csv files in '" + in_dir + "'");

  out << "plan: featurize\n"
      << "  input files: " << paths.size() << " (" << source_name(source) << ")\n"
      << "  window: " << cfg.window_seconds << " s, overlap " << cfg.window_overlap
      << ", ecdf components: " << cfg.ecdf_components << "\n"
      << "  output: " << out_csv << "\n";
  if (dry_run) return;

  WindowedDataset windows = load_windows(cfg, in_dir, source, diag);
  FeatureMatrix features = featurize(windows, cfg.ecdf_components);
  write_feature_csv(features, out_csv);
  out << "wrote " << features.row_count() << " feature rows of dimension " << features.dim
      << "\n";
}

void cmd_experiment(const PipelineConfig& cfg, const std::string& real_dir,
                    const std::string& virtual_dir, const std::string& out_dir, bool dry_run,
                    std::ostream& out, Diagnostics* diag) {
  cfg.validate();
  require_dir(real_dir, "real");
  if (out_dir.empty()) throw ConfigError("experiment: output directory not set");

  ExperimentGrid grid;
  for (const std::string& s : cfg.scenarios) grid.scenarios.push_back(scenario_from_string(s));
  grid.real_fractions = cfg.real_fractions;
  grid.n_runs = cfg.runs;
  grid.forest = cfg.forest_params();
  grid.seed = cfg.seed;
  grid.calibrate = cfg.calibrate;
  grid.calibration_knots = cfg.calibration_knots;
  grid.calibration_per_activity = cfg.calibration_per_activity;
  grid.ecdf_components = cfg.ecdf_components;

  bool needs_virtual = false;
  for (Scenario s : grid.scenarios) needs_virtual = needs_virtual || s != Scenario::Real;
  if (needs_virtual) require_dir(virtual_dir, "virtual");

  std::vector<std::string> rpaths = list_csv_files(real_dir);
  if (rpaths.empty()) throw ConfigError("experiment: no .csv files in '" + real_dir + "'");
  std::vector<std::string> vpaths;
  if (needs_virtual) {
    vpaths = list_csv_files(virtual_dir);
    if (vpaths.empty()) throw ConfigError("experiment: no .csv files in '" + virtual_dir + "'");
  }

  out << "plan: experiment\n"
      << "  real files: " << rpaths.size();
  if (needs_virtual) out << ", virtual files: " << vpaths.size();
  out << "\n  stages: downsample -> accel-only -> per-fold calibration ("
      << (grid.calibrate ? "on" : "off") << ") -> windows -> ecdf -> loso\n"
      << "  scenarios:";
  for (Scenario s : grid.scenarios) out << " " << scenario_name(s);
  out << "\n  real fractions:";
  for (double f : grid.real_fractions) out << " " << fraction_tag(f);
  out << "\n  runs: " << grid.n_runs << ", rf trees: " << cfg.rf_trees << "\n"
      << "  seed: " << grid.seed << "\n"
      << "  output: " << out_dir << "\n";
  if (dry_run) return;

  WindowedDataset real = load_windows(cfg, real_dir, Source::Real, diag);
  WindowedDataset virt;
  if (needs_virtual) virt = load_windows(cfg, virtual_dir, Source::Virtual, diag);

  std::vector<ExperimentReport> reports = run_experiment_grid(real, virt, grid, diag);

  ensure_dir(out_dir);
  for (const ExperimentReport& report : reports)
    write_report_csv(report, (fs::path(out_dir) /
                              ("report_" + report.scenario + "_f" +
                               fraction_tag(report.real_fraction) + ".csv")).string());

  std::ofstream summary((fs::path(out_dir) / "summary.json").string());
  if (!summary) throw IoError("experiment: cannot write summary.json");
  summary << reports_summary_json(reports);

  // Fig. 2 style curve data: fraction column, one mean-F1 column per scenario.
  std::ofstream curve((fs::path(out_dir) / "curve.dat").string());
  if (!curve) throw IoError("experiment: cannot write curve.dat");
  curve << "# real_fraction";
  for (Scenario s : grid.scenarios) curve << " " << scenario_name(s);
  curve << "\n";
  char buf[32];
  for (std::size_t fi = 0; fi < grid.real_fractions.size(); ++fi) {
    curve << fraction_tag(grid.real_fractions[fi]);
    for (std::size_t si = 0; si < grid.scenarios.size(); ++si) {
      const ExperimentReport& r = reports[si * grid.real_fractions.size() + fi];
      std::snprintf(buf, sizeof(buf), "%.6f", r.mean_macro_f1());
      curve << " " << buf;
    }
    curve << "\n";
  }

  out << "wrote " << reports.size() << " report csv files, summary.json and curve.dat\n";
}

}  // namespace virtimu
