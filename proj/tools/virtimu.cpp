// virtimu command line: synth | gen-imu | calibrate | featurize | experiment.
// Thin argument layer over the libvirtimu C API; all pipeline work happens
// behind vt_cmd_*.

#include <virtimu/virtimu.h>

#include <CLI11.hpp>

#include <glob.h>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int exit_code_for(vt_status status) {
  switch (status) {
    case VT_OK: return kExitOk;
    case VT_ERR_CONFIG:
    case VT_ERR_INVALID_ARGUMENT: return kExitUsage;
    default: return kExitRuntime;
  }
}

int fail(vt_status status) {
  std::fprintf(stderr, "error: %s\n", vt_last_error());
  return exit_code_for(status);
}

struct ConfigHandle {
  vt_config* ptr = nullptr;
  ~ConfigHandle() { vt_config_free(ptr); }
};

/// Expands shell-style globs; plain existing paths pass through via glob too.
std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> paths;
  for (const std::string& pattern : patterns) {
    glob_t g{};
    int rc = glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0)
      for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
    globfree(&g);
  }
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  return paths;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtimu: virtual on-body IMU data from skeleton motion"};
  app.set_version_flag("--version", vt_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string seed;
  bool dry_run = false;
  app.add_option("--config", config_path, "pipeline config file (key = value lines)");
  app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--dry-run", dry_run, "print the resolved plan without computing");

  // synth
  auto* synth = app.add_subcommand("synth", "generate parametric motion clips");
  std::string synth_out;
  std::string synth_activities;
  int synth_clips = -1;
  double synth_dur_min = -1, synth_dur_max = -1;
  synth->add_option("--out", synth_out, "output directory for motion JSON files")->required();
  synth->add_option("--activities", synth_activities, "comma-separated activity list");
  synth->add_option("--clips", synth_clips, "clips per activity");
  synth->add_option("--duration-min", synth_dur_min, "minimum clip duration, seconds");
  synth->add_option("--duration-max", synth_dur_max, "maximum clip duration, seconds");

  // gen-imu
  auto* gen = app.add_subcommand("gen-imu", "virtual IMU CSVs from motion files");
  std::string gen_out;
  std::vector<std::string> gen_inputs;
  gen->add_option("--out", gen_out, "output directory for IMU CSV files")->required();
  gen->add_option("motions", gen_inputs, "motion files or globs")->required();

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "fit a rank map from virtual onto real IMU data");
  std::string cal_virtual, cal_real, cal_out;
  cal->add_option("--virtual", cal_virtual, "virtual IMU CSV directory")->required();
  cal->add_option("--real", cal_real, "real IMU CSV directory")->required();
  cal->add_option("--out", cal_out, "output JSON map path")->required();

  // featurize
  auto* feat = app.add_subcommand("featurize", "window + ECDF feature CSV from IMU CSVs");
  std::string feat_in, feat_out, feat_source = "real";
  feat->add_option("--in", feat_in, "IMU CSV directory")->required();
  feat->add_option("--out", feat_out, "output feature CSV path")->required();
  feat->add_option("--source", feat_source, "source tag: real|virtual")
      ->check(CLI::IsMember({"real", "virtual"}));

  // experiment
  auto* exp = app.add_subcommand("experiment", "LOSO real/virtual/mixed evaluation");
  std::string exp_real, exp_virtual, exp_out;
  exp->add_option("--real", exp_real, "real IMU CSV directory")->required();
  exp->add_option("--virtual", exp_virtual, "virtual IMU CSV directory");
  exp->add_option("--out", exp_out, "output directory for reports")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ConfigHandle cfg;
  vt_status st = config_path.empty() ? vt_config_default(&cfg.ptr)
                                     : vt_config_load(config_path.c_str(), &cfg.ptr);
  if (st != VT_OK) return fail(st);

  auto override_key = [&](const char* key, const std::string& value) {
    vt_status s = vt_config_set(cfg.ptr, key, value.c_str());
    return s;
  };
  if (!seed.empty())
    if ((st = override_key("seed", seed)) != VT_OK) return fail(st);

  if (app.got_subcommand(synth)) {
    if (!synth_activities.empty())
      if ((st = override_key("synth_activities", synth_activities)) != VT_OK) return fail(st);
    if (synth_clips >= 0)
      if ((st = override_key("synth_clips_per_activity", std::to_string(synth_clips))) != VT_OK)
        return fail(st);
    if (synth_dur_min >= 0)
      if ((st = override_key("synth_duration_min_s", std::to_string(synth_dur_min))) != VT_OK)
        return fail(st);
    if (synth_dur_max >= 0)
      if ((st = override_key("synth_duration_max_s", std::to_string(synth_dur_max))) != VT_OK)
        return fail(st);
    st = vt_cmd_synth(cfg.ptr, synth_out.c_str(), dry_run);
    return st == VT_OK ? kExitOk : fail(st);
  }

  if (app.got_subcommand(gen)) {
    std::vector<std::string> paths = expand_globs(gen_inputs);
    if (paths.empty()) {
      std::fprintf(stderr, "error: gen-imu: no inputs (globs matched nothing)\n");
      return kExitUsage;
    }
    std::vector<const char*> cpaths;
    cpaths.reserve(paths.size());
    for (const std::string& p : paths) cpaths.push_back(p.c_str());
    st = vt_cmd_gen_imu(cfg.ptr, cpaths.data(), cpaths.size(), gen_out.c_str(), dry_run);
    return st == VT_OK ? kExitOk : fail(st);
  }

  if (app.got_subcommand(cal)) {
    st = vt_cmd_calibrate(cfg.ptr, cal_virtual.c_str(), cal_real.c_str(), cal_out.c_str(),
                          dry_run);
    return st == VT_OK ? kExitOk : fail(st);
  }

  if (app.got_subcommand(feat)) {
    st = vt_cmd_featurize(cfg.ptr, feat_in.c_str(), feat_source == "virtual" ? 1 : 0,
                          feat_out.c_str(), dry_run);
    return st == VT_OK ? kExitOk : fail(st);
  }

  if (app.got_subcommand(exp)) {
    st = vt_cmd_experiment(cfg.ptr, exp_real.c_str(),
                           exp_virtual.empty() ? nullptr : exp_virtual.c_str(), exp_out.c_str(),
                           dry_run);
    return st == VT_OK ? kExitOk : fail(st);
  }

  return kExitUsage;
}
