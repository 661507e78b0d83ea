#pragma once

#include "errors.hpp"
#include "features.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace virtimu {

struct ForestParams {
  int n_trees = 100;
  int min_samples_split = 2;
  int max_depth = 0;            // 0 = grow to purity
  int n_features_per_split = 0; // 0 = floor(sqrt(feature_dim))

  void validate() const {
    if (n_trees < 1) throw std::invalid_argument("forest: n_trees must be >= 1");
    if (min_samples_split < 2) throw std::invalid_argument("forest: min_samples_split must be >= 2");
    if (max_depth < 0 || n_features_per_split < 0)
      throw std::invalid_argument("forest: negative parameter");
  }
};

/// Binary tree over axis-aligned threshold splits. Rows with
/// value <= threshold go left. Leaves carry class-count histograms.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::uint64_t> histogram;  // leaves only

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

/// Bagged forest: each tree trains on a bootstrap sample of size n with
/// Gini-impurity splits over a fresh random feature subset per node.
/// Deterministic given the seed (per-tree generators are derived from it).
struct ForestModel {
  ForestParams params;
  int n_classes = 0;
  std::size_t feature_dim = 0;
  std::uint64_t seed = 0;
  std::vector<Tree> trees;
};

/// Trains on row-major X (rows x dim) with integer labels in [0, n_classes).
/// Requires >= 2 distinct classes and finite feature values.
ForestModel train_forest(std::span<const double> x, std::size_t dim, std::span<const int> y,
                         int n_classes, const ForestParams& params, std::uint64_t seed);

/// Maps string labels onto a sorted class index space.
struct LabelSpace {
  std::vector<std::string> classes;  // sorted unique labels

  static LabelSpace from_labels(std::span<const std::string> labels);
  int index(const std::string& label) const;  // -1 when unknown
  int size() const { return static_cast<int>(classes.size()); }
};

ForestModel train_forest(const FeatureMatrix& features, const LabelSpace& labels,
                         const ForestParams& params, std::uint64_t seed);

/// Per-row argmax of summed leaf histograms; ties break to the lowest class
/// index. Throws on feature-dimension mismatch.
std::vector<int> predict(const ForestModel& model, std::span<const double> x, std::size_t dim);
std::vector<int> predict(const ForestModel& model, const FeatureMatrix& features);

/// Versioned JSON dump; bitwise stable for a fixed seed and input.
std::string forest_to_json(const ForestModel& model);
ForestModel forest_from_json(const std::string& text);

}  // namespace virtimu
