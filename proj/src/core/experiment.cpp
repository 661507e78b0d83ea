#include "experiment.hpp"

#include "metrics.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>

namespace virtimu {

using json = nlohmann::ordered_json;

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Real: return "real";
    case Scenario::Virtual: return "virtual";
    case Scenario::Mixed: return "mixed";
  }
  return "?";
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "real") return Scenario::Real;
  if (name == "virtual") return Scenario::Virtual;
  if (name == "mixed") return Scenario::Mixed;
  throw ConfigError("unknown scenario '" + name + "' (expected real|virtual|mixed)");
}

void ExperimentConfig::validate() const {
  if (!(real_fraction > 0.0 && real_fraction <= 1.0))
    throw std::invalid_argument("experiment: real_fraction must be in (0, 1]");
  if (n_runs < 1) throw std::invalid_argument("experiment: n_runs must be >= 1");
  if (calibration_knots < 2)
    throw std::invalid_argument("experiment: calibration_knots must be >= 2");
  if (ecdf_components < 2)
    throw std::invalid_argument("experiment: ecdf_components must be >= 2");
  forest.validate();
}

double ExperimentReport::mean_macro_f1() const {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.macro_f1;
  return entries.empty() ? 0.0 : sum / static_cast<double>(entries.size());
}

double ExperimentReport::std_across_runs() const {
  if (n_runs < 2 || n_folds < 1) return 0.0;
  std::vector<double> run_means(n_runs, 0.0);
  for (const auto& e : entries) run_means[e.run] += e.macro_f1;
  for (double& m : run_means) m /= static_cast<double>(n_folds);
  double mean = 0.0;
  for (double m : run_means) mean += m;
  mean /= static_cast<double>(n_runs);
  double ss = 0.0;
  for (double m : run_means) ss += (m - mean) * (m - mean);
  return std::sqrt(ss / static_cast<double>(n_runs - 1));
}

std::map<std::string, double> ExperimentReport::per_class_mean() const {
  std::map<std::string, double> sums;
  std::map<std::string, std::size_t> counts;
  for (const auto& e : entries)
    for (const auto& [label, f1] : e.per_class_f1) {
      sums[label] += f1;
      ++counts[label];
    }
  for (auto& [label, v] : sums) v /= static_cast<double>(counts[label]);
  return sums;
}

namespace {

std::uint64_t fraction_bits(double fraction) { return std::bit_cast<std::uint64_t>(fraction); }

std::vector<std::string> sorted_unique_subjects(const std::vector<std::string>& subjects) {
  std::vector<std::string> out(subjects);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Stratified subsample of `candidates` by (subject, class) group: each
/// group keeps round(fraction * size) rows, chosen by a seeded shuffle.
/// Returns sorted row indices. Classes whose every group rounds to zero are
/// reported through `vanished`.
std::vector<std::size_t> stratified_subsample(const std::vector<std::string>& labels,
                                              const std::vector<std::string>& subjects,
                                              const std::vector<std::size_t>& candidates,
                                              double fraction, std::uint64_t seed,
                                              std::vector<std::string>* vanished) {
  if (fraction >= 1.0) return candidates;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
  for (std::size_t row : candidates) groups[{subjects[row], labels[row]}].push_back(row);

  Rng rng = make_rng(seed);
  std::map<std::string, std::size_t> kept_per_class, seen_per_class;
  std::vector<std::size_t> selected;
  for (auto& [key, rows] : groups) {
    seen_per_class[key.second] += rows.size();
    auto target = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(rows.size())));
    if (target > rows.size()) target = rows.size();
    std::shuffle(rows.begin(), rows.end(), rng);
    selected.insert(selected.end(), rows.begin(), rows.begin() + target);
    kept_per_class[key.second] += target;
  }
  if (vanished)
    for (const auto& [label, seen] : seen_per_class)
      if (seen > 0 && kept_per_class[label] == 0) vanished->push_back(label);
  std::sort(selected.begin(), selected.end());
  return selected;
}

FeatureMatrix gather_rows(const FeatureMatrix& source, const std::vector<std::size_t>& rows) {
  FeatureMatrix out;
  out.dim = source.dim;
  out.values.reserve(rows.size() * source.dim);
  for (std::size_t r : rows) {
    const double* row = source.row(r);
    out.values.insert(out.values.end(), row, row + source.dim);
    out.labels.push_back(source.labels[r]);
    out.subjects.push_back(source.subjects[r]);
    out.sources.push_back(source.sources[r]);
  }
  return out;
}

void append_rows(FeatureMatrix& dest, const FeatureMatrix& source) {
  if (dest.dim == 0 && dest.labels.empty()) dest.dim = source.dim;
  if (dest.dim != source.dim)
    throw std::invalid_argument("experiment: real and virtual feature dimensions differ");
  dest.values.insert(dest.values.end(), source.values.begin(), source.values.end());
  dest.labels.insert(dest.labels.end(), source.labels.begin(), source.labels.end());
  dest.subjects.insert(dest.subjects.end(), source.subjects.begin(), source.subjects.end());
  dest.sources.insert(dest.sources.end(), source.sources.begin(), source.sources.end());
}

FoldRunResult evaluate_cell(const FeatureMatrix& train, const FeatureMatrix& test,
                            const LabelSpace& labels, const ForestParams& params,
                            std::uint64_t forest_seed) {
  ForestModel model = train_forest(train, labels, params, forest_seed);

  std::vector<int> actual(test.row_count());
  for (std::size_t r = 0; r < actual.size(); ++r) actual[r] = labels.index(test.labels[r]);
  std::vector<int> predicted = predict(model, test);

  FoldRunResult result;
  result.macro_f1 = macro_f1(predicted, actual, labels.size());
  auto per_class = per_class_f1(predicted, actual, labels.size());
  for (int c = 0; c < labels.size(); ++c)
    if (per_class[c]) result.per_class_f1[labels.classes[c]] = *per_class[c];
  return result;
}

ChannelSamples gather_channel_samples(const WindowedDataset& dataset,
                                      const std::vector<std::size_t>& rows,
                                      const std::string* activity_filter) {
  ChannelSamples samples;
  std::size_t c = dataset.channel_count();
  for (std::size_t i = 0; i < c; ++i) samples[dataset.channels[i]] = {};
  std::vector<std::vector<double>*> columns(c);
  for (std::size_t i = 0; i < c; ++i) columns[i] = &samples[dataset.channels[i]];
  for (std::size_t r : rows) {
    const Window& w = dataset.windows[r];
    if (activity_filter && w.label != *activity_filter) continue;
    for (std::size_t s = 0; s < w.samples.size(); ++s) columns[s % c]->push_back(w.samples[s]);
  }
  return samples;
}

/// Rank map from all virtual windows onto the fold's real training pool,
/// with per-activity refinements when both sides carry the activity.
CalibrationModel fit_fold_calibration(const WindowedDataset& real,
                                      const std::vector<std::size_t>& pool,
                                      const WindowedDataset& virt, int n_knots,
                                      bool per_activity, Diagnostics* diag) {
  std::vector<std::size_t> all_virtual(virt.windows.size());
  for (std::size_t i = 0; i < all_virtual.size(); ++i) all_virtual[i] = i;

  CalibrationModel model;
  model.global = fit_rank_map(gather_channel_samples(virt, all_virtual, nullptr),
                              gather_channel_samples(real, pool, nullptr), n_knots);
  if (!per_activity) return model;

  std::set<std::string> real_acts, virt_acts;
  for (std::size_t r : pool) real_acts.insert(real.windows[r].label);
  for (const Window& w : virt.windows) virt_acts.insert(w.label);
  for (const std::string& activity : virt_acts) {
    if (!real_acts.count(activity)) {
      diag_info(diag, "calibration: activity '" + activity +
                          "' absent from the real training pool; using the global map");
      continue;
    }
    ChannelSamples vs = gather_channel_samples(virt, all_virtual, &activity);
    ChannelSamples rs = gather_channel_samples(real, pool, &activity);
    bool enough = true;
    for (const auto& [name, values] : vs) enough = enough && values.size() >= 2;
    for (const auto& [name, values] : rs) enough = enough && values.size() >= 2;
    if (!enough) {
      diag_info(diag, "calibration: activity '" + activity +
                          "' has too few samples for a per-activity map");
      continue;
    }
    model.per_activity.emplace(activity, fit_rank_map(vs, rs, n_knots));
  }
  return model;
}

FeatureMatrix featurize_calibrated(const WindowedDataset& virt, const CalibrationModel& cal,
                                   int ecdf_components) {
  WindowedDataset mapped = virt;
  for (Window& w : mapped.windows)
    apply_rank_map(cal.select(w.label), mapped.channels, w.samples);
  return featurize(mapped, ecdf_components);
}

struct FoldContext {
  std::vector<std::string> subjects;                   // fold order
  std::vector<std::vector<std::size_t>> test_rows;     // per fold
  std::vector<std::vector<std::size_t>> candidate_rows;  // per fold, non-test rows
};

FoldContext make_folds(const std::vector<std::string>& row_subjects) {
  FoldContext ctx;
  ctx.subjects = sorted_unique_subjects(row_subjects);
  if (ctx.subjects.size() < 2)
    throw std::invalid_argument("experiment: needs >= 2 real subjects for LOSO");
  ctx.test_rows.resize(ctx.subjects.size());
  ctx.candidate_rows.resize(ctx.subjects.size());
  for (std::size_t f = 0; f < ctx.subjects.size(); ++f)
    for (std::size_t r = 0; r < row_subjects.size(); ++r)
      (row_subjects[r] == ctx.subjects[f] ? ctx.test_rows[f] : ctx.candidate_rows[f]).push_back(r);
  return ctx;
}

void check_virtual_subjects(const std::vector<std::string>& virtual_subjects,
                            const std::vector<std::string>& real_subjects) {
  std::set<std::string> real_set(real_subjects.begin(), real_subjects.end());
  for (const std::string& s : virtual_subjects)
    if (!s.empty() && real_set.count(s))
      throw std::invalid_argument("experiment: virtual data carries real subject id '" + s + "'");
}

void check_no_leakage(const FeatureMatrix& train, const std::string& test_subject) {
  for (const std::string& s : train.subjects)
    if (s == test_subject)
      throw std::logic_error("experiment: training row leaked held-out subject '" + test_subject +
                             "'");
}

LabelSpace combined_label_space(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  std::vector<std::string> all(a);
  all.insert(all.end(), b.begin(), b.end());
  return LabelSpace::from_labels(all);
}

void flag_single_class_subjects(const FoldContext& ctx, const std::vector<std::string>& labels,
                                Diagnostics* diag) {
  for (std::size_t f = 0; f < ctx.subjects.size(); ++f) {
    std::set<std::string> seen;
    for (std::size_t r : ctx.test_rows[f]) seen.insert(labels[r]);
    if (seen.size() == 1)
      diag_warn(diag, "experiment: subject '" + ctx.subjects[f] + "' has a single class ('" +
                          *seen.begin() + "')");
  }
}

}  // namespace

ExperimentReport loso_experiment(const FeatureMatrix& real, const FeatureMatrix& virt,
                                 const ExperimentConfig& cfg, Diagnostics* diag) {
  cfg.validate();
  if (real.row_count() == 0) throw std::invalid_argument("experiment: no real rows");
  bool needs_virtual = cfg.scenario != Scenario::Real;
  if (needs_virtual && virt.row_count() == 0)
    throw std::invalid_argument("experiment: scenario uses virtual data but none was given");

  FoldContext ctx = make_folds(real.subjects);
  check_virtual_subjects(virt.subjects, ctx.subjects);
  flag_single_class_subjects(ctx, real.labels, diag);
  LabelSpace labels = needs_virtual ? combined_label_space(real.labels, virt.labels)
                                    : LabelSpace::from_labels(real.labels);

  ExperimentReport report;
  report.scenario = scenario_name(cfg.scenario);
  report.real_fraction = cfg.real_fraction;
  report.n_folds = static_cast<int>(ctx.subjects.size());
  report.n_runs = cfg.n_runs;
  report.subjects = ctx.subjects;
  report.entries.resize(ctx.subjects.size() * static_cast<std::size_t>(cfg.n_runs));

  Diagnostics cell_diags;
  std::mutex diag_mutex;
  parallel_for(report.entries.size(), [&](std::size_t cell) {
    std::size_t fold = cell / cfg.n_runs;
    int run = static_cast<int>(cell % cfg.n_runs);
    std::uint64_t fb = fraction_bits(cfg.real_fraction);
    std::vector<std::string> vanished;
    std::vector<std::size_t> pool = stratified_subsample(
        real.labels, real.subjects, ctx.candidate_rows[fold], cfg.real_fraction,
        derive_seed(cfg.seed, seed_tag("subsample"), fb, fold, static_cast<std::uint64_t>(run)),
        &vanished);

    FeatureMatrix train;
    if (cfg.scenario != Scenario::Virtual) train = gather_rows(real, pool);
    std::size_t n_real_rows = train.row_count();
    if (cfg.scenario != Scenario::Real) append_rows(train, virt);
    check_no_leakage(train, ctx.subjects[fold]);

    FeatureMatrix test = gather_rows(real, ctx.test_rows[fold]);
    FoldRunResult result = evaluate_cell(
        train, test, labels, cfg.forest,
        derive_seed(cfg.seed, seed_tag("forest"), fb, fold, static_cast<std::uint64_t>(run)));
    result.fold = static_cast<int>(fold);
    result.run = run;
    result.test_subject = ctx.subjects[fold];
    result.n_train_real = n_real_rows;
    result.n_train_virtual = train.row_count() - n_real_rows;
    report.entries[cell] = std::move(result);

    if (!vanished.empty()) {
      std::lock_guard<std::mutex> lock(diag_mutex);
      for (const std::string& label : vanished)
        cell_diags.warn("experiment: class '" + label + "' vanished from the fold " +
                        std::to_string(fold) + "/run " + std::to_string(run) +
                        " training pool at fraction " + std::to_string(cfg.real_fraction));
    }
  });
  if (diag) diag->items.insert(diag->items.end(), cell_diags.items.begin(), cell_diags.items.end());
  return report;
}

std::vector<ExperimentReport> run_experiment_grid(const WindowedDataset& real,
                                                  const WindowedDataset& virt,
                                                  const ExperimentGrid& grid,
                                                  Diagnostics* diag) {
  if (grid.scenarios.empty() || grid.real_fractions.empty())
    throw std::invalid_argument("experiment: empty scenario or fraction grid");
  for (double f : grid.real_fractions)
    if (!(f > 0.0 && f <= 1.0))
      throw std::invalid_argument("experiment: real_fraction must be in (0, 1]");
  if (grid.n_runs < 1) throw std::invalid_argument("experiment: n_runs must be >= 1");
  grid.forest.validate();
  if (real.windows.empty()) throw std::invalid_argument("experiment: no real windows");

  bool needs_virtual = false;
  for (Scenario s : grid.scenarios) needs_virtual = needs_virtual || s != Scenario::Real;
  if (needs_virtual && virt.windows.empty())
    throw std::invalid_argument("experiment: scenario grid uses virtual data but none was given");
  if (needs_virtual && virt.channels != real.channels)
    throw std::invalid_argument("experiment: real and virtual channel layouts differ");

  std::vector<std::string> real_subjects, real_labels, virt_subjects, virt_labels;
  for (const Window& w : real.windows) {
    real_subjects.push_back(w.subject);
    real_labels.push_back(w.label);
  }
  for (const Window& w : virt.windows) {
    virt_subjects.push_back(w.subject);
    virt_labels.push_back(w.label);
  }

  FoldContext ctx = make_folds(real_subjects);
  check_virtual_subjects(virt_subjects, ctx.subjects);
  flag_single_class_subjects(ctx, real_labels, diag);
  LabelSpace labels = needs_virtual ? combined_label_space(real_labels, virt_labels)
                                    : LabelSpace::from_labels(real_labels);

  FeatureMatrix real_features = featurize(real, grid.ecdf_components);
  FeatureMatrix virt_features_raw;
  if (needs_virtual && !grid.calibrate) virt_features_raw = featurize(virt, grid.ecdf_components);

  std::size_t n_folds = ctx.subjects.size();
  auto n_runs = static_cast<std::size_t>(grid.n_runs);
  std::size_t n_cells = grid.real_fractions.size() * n_folds * n_runs;

  // One slot per (fraction, fold, run, scenario), shared pools within a cell.
  std::vector<std::vector<FoldRunResult>> results(
      grid.scenarios.size(), std::vector<FoldRunResult>(n_cells));

  Diagnostics cell_diags;
  std::mutex diag_mutex;
  parallel_for(n_cells, [&](std::size_t cell) {
    std::size_t fi = cell / (n_folds * n_runs);
    std::size_t fold = (cell / n_runs) % n_folds;
    int run = static_cast<int>(cell % n_runs);
    double fraction = grid.real_fractions[fi];
    std::uint64_t fb = fraction_bits(fraction);

    std::vector<std::string> vanished;
    std::vector<std::size_t> pool = stratified_subsample(
        real_labels, real_subjects, ctx.candidate_rows[fold], fraction,
        derive_seed(grid.seed, seed_tag("subsample"), fb, fold, static_cast<std::uint64_t>(run)),
        &vanished);
    for (std::size_t r : pool)
      if (real_subjects[r] == ctx.subjects[fold])
        throw std::logic_error("experiment: calibration pool leaked held-out subject");

    FeatureMatrix pool_features = gather_rows(real_features, pool);
    FeatureMatrix test_features = gather_rows(real_features, ctx.test_rows[fold]);

    Diagnostics local;
    FeatureMatrix virt_features;
    if (needs_virtual) {
      if (grid.calibrate) {
        CalibrationModel cal =
            fit_fold_calibration(real, pool, virt, grid.calibration_knots,
                                 grid.calibration_per_activity, &local);
        virt_features = featurize_calibrated(virt, cal, grid.ecdf_components);
      } else {
        virt_features = virt_features_raw;
      }
    }

    std::uint64_t forest_seed = derive_seed(grid.seed, seed_tag("forest"), fb, fold,
                                            static_cast<std::uint64_t>(run));
    for (std::size_t si = 0; si < grid.scenarios.size(); ++si) {
      Scenario scenario = grid.scenarios[si];
      FeatureMatrix train;
      if (scenario != Scenario::Virtual) train = pool_features;
      std::size_t n_real_rows = train.row_count();
      if (scenario != Scenario::Real) append_rows(train, virt_features);
      check_no_leakage(train, ctx.subjects[fold]);

      FoldRunResult result =
          evaluate_cell(train, test_features, labels, grid.forest, forest_seed);
      result.fold = static_cast<int>(fold);
      result.run = run;
      result.test_subject = ctx.subjects[fold];
      result.n_train_real = n_real_rows;
      result.n_train_virtual = train.row_count() - n_real_rows;
      results[si][cell] = std::move(result);
    }

    if (!vanished.empty() || !local.items.empty()) {
      std::lock_guard<std::mutex> lock(diag_mutex);
      for (const std::string& label : vanished)
        cell_diags.warn("experiment: class '" + label + "' vanished from the fold " +
                        std::to_string(fold) + "/run " + std::to_string(run) +
                        " training pool at fraction " + std::to_string(fraction));
      cell_diags.items.insert(cell_diags.items.end(), local.items.begin(), local.items.end());
    }
  });
  if (diag) diag->items.insert(diag->items.end(), cell_diags.items.begin(), cell_diags.items.end());

  std::vector<ExperimentReport> reports;
  for (std::size_t si = 0; si < grid.scenarios.size(); ++si) {
    for (std::size_t fi = 0; fi < grid.real_fractions.size(); ++fi) {
      ExperimentReport report;
      report.scenario = scenario_name(grid.scenarios[si]);
      report.real_fraction = grid.real_fractions[fi];
      report.n_folds = static_cast<int>(n_folds);
      report.n_runs = grid.n_runs;
      report.subjects = ctx.subjects;
      for (std::size_t fold = 0; fold < n_folds; ++fold)
        for (std::size_t run = 0; run < n_runs; ++run)
          report.entries.push_back(results[si][fi * n_folds * n_runs + fold * n_runs + run]);
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

ExperimentReport loso_experiment(const WindowedDataset& real, const WindowedDataset& virt,
                                 const ExperimentConfig& cfg, Diagnostics* diag) {
  cfg.validate();
  ExperimentGrid grid;
  grid.scenarios = {cfg.scenario};
  grid.real_fractions = {cfg.real_fraction};
  grid.n_runs = cfg.n_runs;
  grid.forest = cfg.forest;
  grid.seed = cfg.seed;
  grid.calibrate = cfg.calibrate;
  grid.calibration_knots = cfg.calibration_knots;
  grid.calibration_per_activity = cfg.calibration_per_activity;
  grid.ecdf_components = cfg.ecdf_components;
  return run_experiment_grid(real, virt, grid, diag)[0];
}

void write_report_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("report: cannot write '" + path + "'");
  out << "scenario,fold,run,macro_f1\n";
  char buf[32];
  for (const FoldRunResult& e : report.entries) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.macro_f1);
    out << report.scenario << ',' << e.fold << ',' << e.run << ',' << buf << "\n";
  }
  if (!out) throw IoError("report: write failed for '" + path + "'");
}

std::string reports_summary_json(const std::vector<ExperimentReport>& reports) {
  json j;
  j["format_version"] = 1;
  json scenarios = json::object();
  for (const ExperimentReport& r : reports) {
    char key[32];
    std::snprintf(key, sizeof(key), "%g", r.real_fraction);
    json entry;
    entry["mean_macro_f1"] = r.mean_macro_f1();
    entry["std_across_runs"] = r.std_across_runs();
    entry["n_folds"] = r.n_folds;
    entry["n_runs"] = r.n_runs;
    entry["per_class_f1"] = r.per_class_mean();
    json entries = json::array();
    for (const FoldRunResult& e : r.entries)
      entries.push_back({{"fold", e.fold},
                         {"run", e.run},
                         {"subject", e.test_subject},
                         {"macro_f1", e.macro_f1},
                         {"n_train_real", e.n_train_real},
                         {"n_train_virtual", e.n_train_virtual}});
    entry["entries"] = std::move(entries);
    scenarios[r.scenario][key] = std::move(entry);
  }
  j["scenarios"] = scenarios;

  // Fig. 3a style: per-class mixed-minus-real deltas at each fraction.
  json deltas = json::object();
  for (const ExperimentReport& mixed : reports) {
    if (mixed.scenario != "mixed") continue;
    for (const ExperimentReport& realr : reports) {
      if (realr.scenario != "real" || realr.real_fraction != mixed.real_fraction) continue;
      char key[32];
      std::snprintf(key, sizeof(key), "%g", mixed.real_fraction);
      json d = json::object();
      auto mixed_f1 = mixed.per_class_mean();
      auto real_f1 = realr.per_class_mean();
      for (const auto& [label, value] : mixed_f1)
        if (real_f1.count(label)) d[label] = value - real_f1[label];
      deltas[key] = std::move(d);
    }
  }
  j["per_class_delta_mixed_minus_real"] = deltas;
  return j.dump(2) + "\n";
}

}  // namespace virtimu
