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

#include <span>
#include <string>
#include <vector>

#include "phasespace/exact_lindblad.hpp"
#include "phasespace/stochastic_engine.hpp"
#include "phasespace/types.hpp"

namespace phasespace {

/// tr(sigma^axis Lambda(psi, phi)). With printed_sigma_y the y symbol takes
/// the opposite sign, i (psi - phi) / (1 + psi phi).
Complex phase_observable(char axis, Complex psi, Complex phi, bool printed_sigma_y = false);

struct MeanError {
  double mean = 0.0;
  /// Sample standard deviation / sqrt(M); NaN for M < 2.
  double error = 0.0;
};

MeanError mean_and_error(std::span<const double> samples);

/// Trajectory-level jackknife of f(mean a, mean b) = mean a - (mean b)^2.
MeanError jackknife_variance(std::span<const double> second, std::span<const double> first);

struct ObservableSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  /// [observable][time]
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> error;
  int trajectories = 0;
  int aborted = 0;
  std::vector<double> mean_jumps;

  int index(const std::string& name) const;
  const std::vector<double>& mean_of(const std::string& name) const { return mean[index(name)]; }
  const std::vector<double>& error_of(const std::string& name) const { return error[index(name)]; }
};

/// Names in emission order.
inline const std::vector<std::string> kCollectiveNames{"Sx", "Sy", "Sz", "dSx", "dSy", "dSz"};

/// S^a = (1/2n) sum_j sigma^a_j and Delta S^a = <S^a S^a> - <S^a>^2 for
/// a = x, y, z over the non-aborted trajectories.
ObservableSeries collective_estimates(const EnsembleResult& ensemble, bool printed_sigma_y = false);

/// Same observables from exact density matrices (errors are zero).
ObservableSeries exact_collective(const std::vector<DensityMatrix>& states);

}  // namespace phasespace
