#pragma once

#include <map>
#include <string>
#include <vector>

namespace qmelab::experiments {

struct ExperimentSpec {
  std::string name;
  // Raw k=v pairs; numbers may carry a trailing "pi", e.g. "4pi" or "0.5pi".
  std::map<std::string, std::string> params;
  // Empty when no config file is given.
  std::string config;
  std::string output = "qmelab_out";
  unsigned threads = 1;
};

enum ExitStatus : int { kOk = 0, kError = 1, kViolation = 2 };

const std::vector<std::string>& experiment_names();

// Command-specific defaults as written on the command line.
const std::map<std::string, std::string>& experiment_defaults(const std::string& name);

// Throws ConfigError for an unknown name, unknown or malformed parameters, or a missing config.
void validate(const ExperimentSpec& spec);

// Writes <output>.csv and <output>.json and returns the exit status.
int run(const ExperimentSpec& spec);

// QMELAB_THREADS caps the worker count; unset or invalid values give `fallback`.
unsigned threads_from_env(unsigned fallback);

}  // namespace qmelab::experiments
