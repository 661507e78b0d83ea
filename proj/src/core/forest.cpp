#include "forest.hpp"

#include "parallel.hpp"
#include "rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace virtimu {

using json = nlohmann::ordered_json;

namespace {

struct TreeBuilder {
  std::span<const double> x;
  std::size_t dim;
  std::span<const int> y;
  int n_classes;
  const ForestParams& params;
  std::size_t n_split_features;
  Rng rng;

  Tree tree;
  std::vector<std::uint32_t> rows;          // bootstrap sample, partitioned in place
  std::vector<std::uint32_t> feature_pool;  // 0..dim-1, shuffled prefix per node
  std::vector<std::pair<double, int>> scratch;
  std::vector<std::uint64_t> left_counts;
  std::vector<std::uint64_t> total_counts;

  TreeBuilder(std::span<const double> x_, std::size_t dim_, std::span<const int> y_,
              int n_classes_, const ForestParams& params_, std::size_t m, std::uint64_t seed)
      : x(x_), dim(dim_), y(y_), n_classes(n_classes_), params(params_), n_split_features(m),
        rng(make_rng(seed)) {
    std::size_t n = y.size();
    rows.resize(n);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    for (std::size_t i = 0; i < n; ++i) rows[i] = pick(rng);
    feature_pool.resize(dim);
    for (std::size_t f = 0; f < dim; ++f) feature_pool[f] = static_cast<std::uint32_t>(f);
    scratch.reserve(n);
    left_counts.resize(n_classes);
    total_counts.resize(n_classes);
  }

  int make_leaf(std::size_t begin, std::size_t end) {
    TreeNode node;
    node.histogram.assign(n_classes, 0);
    for (std::size_t i = begin; i < end; ++i) ++node.histogram[y[rows[i]]];
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size() - 1);
  }

  int build(std::size_t begin, std::size_t end, int depth) {
    std::size_t n = end - begin;
    bool pure = true;
    for (std::size_t i = begin + 1; i < end && pure; ++i)
      pure = y[rows[i]] == y[rows[begin]];
    if (pure || n < static_cast<std::size_t>(params.min_samples_split) ||
        (params.max_depth > 0 && depth >= params.max_depth))
      return make_leaf(begin, end);

    // Fresh random feature subset for this node.
    for (std::size_t k = 0; k < n_split_features; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, dim - 1);
      std::swap(feature_pool[k], feature_pool[pick(rng)]);
    }

    double best_score = -std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;

    for (std::size_t k = 0; k < n_split_features; ++k) {
      std::uint32_t f = feature_pool[k];
      scratch.clear();
      for (std::size_t i = begin; i < end; ++i)
        scratch.emplace_back(x[static_cast<std::size_t>(rows[i]) * dim + f], y[rows[i]]);
      std::sort(scratch.begin(), scratch.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (scratch.front().first == scratch.back().first) continue;

      // Maximizing sum(c_l^2)/n_l + sum(c_r^2)/n_r minimizes the weighted
      // Gini impurity of the two children.
      std::fill(left_counts.begin(), left_counts.end(), 0);
      std::fill(total_counts.begin(), total_counts.end(), 0);
      std::uint64_t sumsq_left = 0, sumsq_right = 0;
      for (const auto& [value, cls] : scratch) ++total_counts[cls];
      for (int cls = 0; cls < n_classes; ++cls)
        sumsq_right += total_counts[cls] * total_counts[cls];

      for (std::size_t i = 0; i + 1 < n; ++i) {
        int cls = scratch[i].second;
        std::uint64_t cl = left_counts[cls];
        std::uint64_t cr = total_counts[cls] - cl;
        sumsq_left += 2 * cl + 1;
        sumsq_right -= 2 * cr - 1;
        ++left_counts[cls];
        if (scratch[i].first == scratch[i + 1].first) continue;
        double nl = static_cast<double>(i + 1);
        double nr = static_cast<double>(n - i - 1);
        double score = static_cast<double>(sumsq_left) / nl + static_cast<double>(sumsq_right) / nr;
        if (score > best_score) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = scratch[i].first;
        }
      }
    }

    if (best_feature < 0) return make_leaf(begin, end);  // constant in every candidate feature

    auto mid_it = std::partition(rows.begin() + begin, rows.begin() + end,
                                 [&](std::uint32_t r) {
                                   return x[static_cast<std::size_t>(r) * dim + best_feature] <=
                                          best_threshold;
                                 });
    std::size_t mid = static_cast<std::size_t>(mid_it - rows.begin());

    int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[node_index].feature = best_feature;
    tree.nodes[node_index].threshold = best_threshold;
    int left = build(begin, mid, depth + 1);
    int right = build(mid, end, depth + 1);
    tree.nodes[node_index].left = left;
    tree.nodes[node_index].right = right;
    return node_index;
  }
};

}  // namespace

ForestModel train_forest(std::span<const double> x, std::size_t dim, std::span<const int> y,
                         int n_classes, const ForestParams& params, std::uint64_t seed) {
  params.validate();
  if (dim == 0 || y.empty() || x.size() != y.size() * dim)
    throw std::invalid_argument("train_forest: feature matrix shape mismatch");
  if (n_classes < 2) throw std::invalid_argument("train_forest: needs >= 2 classes");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("train_forest: non-finite feature value");
  bool multiclass = false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0 || y[i] >= n_classes)
      throw std::invalid_argument("train_forest: label out of range");
    multiclass = multiclass || y[i] != y[0];
  }
  if (!multiclass) throw std::invalid_argument("train_forest: training data has a single class");

  std::size_t m = params.n_features_per_split > 0
                      ? static_cast<std::size_t>(params.n_features_per_split)
                      : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(dim))));
  m = std::clamp<std::size_t>(m, 1, dim);

  ForestModel model;
  model.params = params;
  model.n_classes = n_classes;
  model.feature_dim = dim;
  model.seed = seed;
  model.trees.resize(params.n_trees);

  parallel_for(static_cast<std::size_t>(params.n_trees), [&](std::size_t t) {
    TreeBuilder builder(x, dim, y, n_classes, params, m,
                        derive_seed(seed, seed_tag("tree"), t));
    builder.build(0, y.size(), 0);
    model.trees[t] = std::move(builder.tree);
  });
  return model;
}

LabelSpace LabelSpace::from_labels(std::span<const std::string> labels) {
  LabelSpace space;
  space.classes.assign(labels.begin(), labels.end());
  std::sort(space.classes.begin(), space.classes.end());
  space.classes.erase(std::unique(space.classes.begin(), space.classes.end()),
                      space.classes.end());
  return space;
}

int LabelSpace::index(const std::string& label) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label) return -1;
  return static_cast<int>(it - classes.begin());
}

ForestModel train_forest(const FeatureMatrix& features, const LabelSpace& labels,
                         const ForestParams& params, std::uint64_t seed) {
  std::vector<int> y(features.row_count());
  for (std::size_t r = 0; r < y.size(); ++r) {
    y[r] = labels.index(features.labels[r]);
    if (y[r] < 0)
      throw std::invalid_argument("train_forest: label '" + features.labels[r] +
                                  "' not in label space");
  }
  return train_forest(features.values, features.dim, y, labels.size(), params, seed);
}

std::vector<int> predict(const ForestModel& model, std::span<const double> x, std::size_t dim) {
  if (dim != model.feature_dim)
    throw std::invalid_argument("predict: feature dimension mismatch");
  if (dim == 0 || x.size() % dim != 0) throw std::invalid_argument("predict: ragged input");
  std::size_t n = x.size() / dim;
  std::vector<int> out(n);
  std::vector<std::uint64_t> votes(model.n_classes);
  for (std::size_t r = 0; r < n; ++r) {
    std::fill(votes.begin(), votes.end(), 0);
    const double* row = x.data() + r * dim;
    for (const Tree& tree : model.trees) {
      int node = 0;
      while (!tree.nodes[node].is_leaf())
        node = row[tree.nodes[node].feature] <= tree.nodes[node].threshold
                   ? tree.nodes[node].left
                   : tree.nodes[node].right;
      const auto& hist = tree.nodes[node].histogram;
      for (int c = 0; c < model.n_classes; ++c) votes[c] += hist[c];
    }
    int best = 0;
    for (int c = 1; c < model.n_classes; ++c)
      if (votes[c] > votes[best]) best = c;
    out[r] = best;
  }
  return out;
}

std::vector<int> predict(const ForestModel& model, const FeatureMatrix& features) {
  return predict(model, features.values, features.dim);
}

std::string forest_to_json(const ForestModel& model) {
  json j;
  j["format_version"] = 1;
  j["n_classes"] = model.n_classes;
  j["feature_dim"] = model.feature_dim;
  j["seed"] = model.seed;
  j["params"] = {{"n_trees", model.params.n_trees},
                 {"min_samples_split", model.params.min_samples_split},
                 {"max_depth", model.params.max_depth},
                 {"n_features_per_split", model.params.n_features_per_split}};
  json trees = json::array();
  for (const Tree& tree : model.trees) {
    json nodes = json::array();
    for (const TreeNode& node : tree.nodes) {
      json nj = {{"f", node.feature}};
      if (node.is_leaf()) {
        nj["h"] = node.histogram;
      } else {
        nj["t"] = node.threshold;
        nj["l"] = node.left;
        nj["r"] = node.right;
      }
      nodes.push_back(std::move(nj));
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);
  return j.dump() + "\n";
}

ForestModel forest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("forest: invalid JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1)
      throw ParseError("forest: unsupported format_version");
    ForestModel model;
    model.n_classes = j.at("n_classes").get<int>();
    model.feature_dim = j.at("feature_dim").get<std::size_t>();
    model.seed = j.at("seed").get<std::uint64_t>();
    const json& p = j.at("params");
    model.params.n_trees = p.at("n_trees").get<int>();
    model.params.min_samples_split = p.at("min_samples_split").get<int>();
    model.params.max_depth = p.at("max_depth").get<int>();
    model.params.n_features_per_split = p.at("n_features_per_split").get<int>();
    for (const json& tj : j.at("trees")) {
      Tree tree;
      for (const json& nj : tj.at("nodes")) {
        TreeNode node;
        node.feature = nj.at("f").get<int>();
        if (node.feature < 0) {
          node.histogram = nj.at("h").get<std::vector<std::uint64_t>>();
          if (node.histogram.size() != static_cast<std::size_t>(model.n_classes))
            throw ParseError("forest: leaf histogram size mismatch");
        } else {
          node.threshold = nj.at("t").get<double>();
          node.left = nj.at("l").get<int>();
          node.right = nj.at("r").get<int>();
        }
        tree.nodes.push_back(std::move(node));
      }
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("forest: missing or mistyped field: ") + e.what());
  }
}

}  // namespace virtimu
