// Copyright 2026 The phasespace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "phasespace/correspondence.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/stochastic_engine.hpp"

namespace phasespace {

enum class Mode { Validate, Exact, Simulate, Compare };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

enum class InitKind { CoherentX, DiscreteMixed };

struct RunConfig {
  Mode mode = Mode::Simulate;
  ModelParams params;
  RunSchedule schedule;
  /// Number of uniform output times over [0, t_max], both ends included.
  int output_points = 200;
  InitKind init = InitKind::CoherentX;
  bool sigma_y_printed = false;
  /// Output files are <out>.csv, <out>.json and mode-specific siblings.
  std::string out = "phasespace";

  RunConfig();

  /// Fills schedule.t_out from t_max and output_points.
  void finalize();
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Applies one key/value pair. Keys match the long CLI flags with or without
/// the leading dashes; '-' and '_' are interchangeable.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat key/value text: whitespace-separated `key value` pairs (or `key=value`),
/// '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path, RunConfig base = {});
std::string write_config(const RunConfig& config);

/// Thread count from PHASESPACE_THREADS, else 0 (hardware concurrency).
int threads_from_env();
inline constexpr const char* kThreadsEnv = "PHASESPACE_THREADS";

std::string version_string();

/// 17 significant digits; nan/inf spelled out.
std::string format_double(double x);

void write_series_csv(std::ostream& os, const ObservableSeries& series);

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Kernel, generator, factorisation, observable and projection invariant suites.
std::vector<CheckResult> run_validation_suites(std::uint64_t seed = 1);

/// Per-time |stochastic - exact| / standard error.
struct ZScores {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> z;
  double max_abs_first = 0.0;
  double max_abs_second = 0.0;
};
ZScores compare_series(const ObservableSeries& exact, const ObservableSeries& stochastic);

/// Exit status: 0 success, 1 failed check or comparison, 2 usage error,
/// 3 refused (oracle scale).
int run(const RunConfig& config, std::ostream& log);

}  // namespace phasespace
