#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace virtimu {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file exists but its content violates the format contract.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration (file or override) is malformed or inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Severity { Info, Warning };

struct Diagnostic {
  Severity severity = Severity::Info;
  std::string message;
};

/// Collector for non-fatal findings (degenerate frames, dropped windows,
/// vanished classes, ...). Callers that do not care pass nullptr.
struct Diagnostics {
  std::vector<Diagnostic> items;

  void warn(std::string msg) { items.push_back({Severity::Warning, std::move(msg)}); }
  void info(std::string msg) { items.push_back({Severity::Info, std::move(msg)}); }

  bool has_warnings() const {
    for (const auto& d : items)
      if (d.severity == Severity::Warning) return true;
    return false;
  }
};

inline void diag_warn(Diagnostics* d, std::string msg) {
  if (d) d->warn(std::move(msg));
}

inline void diag_info(Diagnostics* d, std::string msg) {
  if (d) d->info(std::move(msg));
}

}  // namespace virtimu
