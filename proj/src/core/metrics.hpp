#pragma once

#include <optional>
#include <span>
#include <vector>

namespace virtimu {

/// Per-class F1 over integer labels in [0, n_classes). A class with zero
/// support and zero predictions is excluded (nullopt); a class that appears
/// on either side but earns no true positives scores 0.
std::vector<std::optional<double>> per_class_f1(std::span<const int> predicted,
                                                std::span<const int> actual, int n_classes);

/// Unweighted mean of the included per-class F1 scores.
double macro_f1(std::span<const int> predicted, std::span<const int> actual, int n_classes);

}  // namespace virtimu
