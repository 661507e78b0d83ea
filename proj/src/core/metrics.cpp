#include "metrics.hpp"

#include <stdexcept>

namespace virtimu {

std::vector<std::optional<double>> per_class_f1(std::span<const int> predicted,
                                                std::span<const int> actual, int n_classes) {
  if (predicted.size() != actual.size())
    throw std::invalid_argument("per_class_f1: length mismatch");
  if (predicted.empty()) throw std::invalid_argument("per_class_f1: empty input");
  if (n_classes < 1) throw std::invalid_argument("per_class_f1: n_classes must be >= 1");

  std::vector<std::size_t> tp(n_classes, 0), fp(n_classes, 0), fn(n_classes, 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    int p = predicted[i], a = actual[i];
    if (p < 0 || p >= n_classes || a < 0 || a >= n_classes)
      throw std::invalid_argument("per_class_f1: label out of range");
    if (p == a)
      ++tp[p];
    else {
      ++fp[p];
      ++fn[a];
    }
  }

  std::vector<std::optional<double>> f1(n_classes);
  for (int c = 0; c < n_classes; ++c) {
    std::size_t support = tp[c] + fn[c];
    std::size_t predicted_count = tp[c] + fp[c];
    if (support == 0 && predicted_count == 0) continue;  // outside this fold's label space
    double denom = static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
    f1[c] = denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp[c]) / denom;
  }
  return f1;
}

double macro_f1(std::span<const int> predicted, std::span<const int> actual, int n_classes) {
  auto f1 = per_class_f1(predicted, actual, n_classes);
  double sum = 0.0;
  std::size_t included = 0;
  for (const auto& v : f1) {
    if (!v) continue;
    sum += *v;
    ++included;
  }
  if (included == 0) throw std::invalid_argument("macro_f1: no class present on either side");
  return sum / static_cast<double>(included);
}

}  // namespace virtimu
