#pragma once

#include "calibration.hpp"
#include "errors.hpp"
#include "features.hpp"
#include "forest.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace virtimu {

enum class Scenario { Real, Virtual, Mixed };

const char* scenario_name(Scenario s);
Scenario scenario_from_string(const std::string& name);

struct ExperimentConfig {
  Scenario scenario = Scenario::Real;
  double real_fraction = 1.0;  // fraction of real training rows kept per fold
  int n_runs = 3;
  ForestParams forest;
  std::uint64_t seed = 0;
  bool calibrate = true;  // rank-map virtual windows against the fold's real pool
  int calibration_knots = 1000;
  bool calibration_per_activity = true;
  int ecdf_components = 15;

  void validate() const;
};

struct FoldRunResult {
  int fold = 0;
  int run = 0;
  std::string test_subject;
  double macro_f1 = 0.0;
  std::map<std::string, double> per_class_f1;  // classes in this fold's label space
  std::size_t n_train_real = 0;
  std::size_t n_train_virtual = 0;
};

struct ExperimentReport {
  std::string scenario;
  double real_fraction = 1.0;
  int n_folds = 0;
  int n_runs = 0;
  std::vector<std::string> subjects;   // fold order
  std::vector<FoldRunResult> entries;  // fold-major, run-minor

  double mean_macro_f1() const;
  /// Sample standard deviation of the per-run fold means (0 for one run).
  double std_across_runs() const;
  std::map<std::string, double> per_class_mean() const;
};

/// Leave-one-subject-out protocol over precomputed feature rows. Folds are
/// the sorted unique real subjects; per fold and run the remaining real rows
/// are subsampled to real_fraction (stratified by class within subjects,
/// seeded), virtual rows join when the scenario uses them, and the model is
/// evaluated on every row of the held-out subject. No calibration happens at
/// this level; use the windowed overload for the full protocol.
ExperimentReport loso_experiment(const FeatureMatrix& real, const FeatureMatrix& virt,
                                 const ExperimentConfig& cfg, Diagnostics* diag = nullptr);

/// Full protocol on raw windows: per fold and run a rank map is fitted from
/// the virtual windows onto that fold's real training pool only, applied to
/// the virtual windows, and features are extracted afterwards. Real windows
/// (train and test) are never remapped.
ExperimentReport loso_experiment(const WindowedDataset& real, const WindowedDataset& virt,
                                 const ExperimentConfig& cfg, Diagnostics* diag = nullptr);

/// Scenario x fraction grid sharing training pools and calibrated virtual
/// features across scenarios at each (fraction, fold, run) cell. Reports are
/// ordered scenario-major in the given order, fractions inner.
struct ExperimentGrid {
  std::vector<Scenario> scenarios;
  std::vector<double> real_fractions;
  int n_runs = 3;
  ForestParams forest;
  std::uint64_t seed = 0;
  bool calibrate = true;
  int calibration_knots = 1000;
  bool calibration_per_activity = true;
  int ecdf_components = 15;
};

std::vector<ExperimentReport> run_experiment_grid(const WindowedDataset& real,
                                                  const WindowedDataset& virt,
                                                  const ExperimentGrid& grid,
                                                  Diagnostics* diag = nullptr);

/// CSV rows `scenario,fold,run,macro_f1`.
void write_report_csv(const ExperimentReport& report, const std::string& path);

/// JSON summary of one or more reports: per scenario/fraction means, stds
/// and per-class F1, plus mixed-minus-real per-class deltas when both
/// scenarios are present.
std::string reports_summary_json(const std::vector<ExperimentReport>& reports);

}  // namespace virtimu
