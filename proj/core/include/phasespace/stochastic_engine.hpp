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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "phasespace/correspondence.hpp"
#include "phasespace/discrete_projection.hpp"
#include "phasespace/state.hpp"

namespace phasespace {

/// Column b of a noise factorization with at most two nonzero entries
/// (j < 0 marks a single-entry column).
struct NoiseColumn {
  int i = 0;
  int j = -1;
  Complex bi;
  Complex bj;
};

using NoiseFactorization = std::vector<NoiseColumn>;

/// Sum_m b_m b_m^T == D exactly, term by term.
void factorize_diffusion(std::span<const DiffusionTerm> terms, NoiseFactorization& out);
NoiseFactorization factorize_diffusion(std::span<const DiffusionTerm> terms);

/// Dense Sum_m b_m b_m^T of dimension dim.
Matrix reconstruct_diffusion(const NoiseFactorization& columns, int dim);

/// Number of real standard-normal draws per step.
int noise_dimension(const ChainDynamics& dynamics);

/// z <- z + A dt + sum_m b_m sqrt(dt) xi_m; t advances by dt.
void em_step(PhaseSpaceState& z, const Vector& drift, const NoiseFactorization& columns, double dt,
             std::span<const double> noise);

struct StepWorkspace {
  Vector drift;
  std::vector<DiffusionTerm> terms;
  NoiseFactorization columns;
};

void em_step(PhaseSpaceState& z, const ChainDynamics& dynamics, double dt, std::span<const double> noise,
             StepWorkspace& ws);
PhaseSpaceState em_step(const PhaseSpaceState& z, const ModelParams& params, double dt,
                        std::span<const double> noise);

struct RunSchedule {
  double dt = 1e-3;
  std::vector<double> t_out;
  double t_max = 0.0;
  double z_max = 10.0 * 1.4142135623730951;
  double eps = 0.1;
  int trajectories = 1;
  std::uint64_t master_seed = 0;
  /// Off: projection never fires and leaving the domain aborts the trajectory.
  bool regularize = true;

  /// Throws InvalidParameter.
  void validate() const;
  /// t_out = {0, step, 2 step, ...} up to t_max.
  static std::vector<double> uniform_times(double t_max, double step);
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

struct TrajectoryRecord {
  double t = 0.0;
  std::vector<Complex> psi;
  std::vector<Complex> phi;
  std::uint64_t jumps = 0;
};

struct TrajectoryResult {
  std::vector<TrajectoryRecord> records;
  bool aborted = false;
  double abort_time = 0.0;
  std::string abort_reason;
  /// Per-site projection counters at the end of the run.
  std::vector<std::uint64_t> site_jumps;
};

TrajectoryResult run_trajectory(const ChainDynamics& dynamics, const RunSchedule& schedule, std::uint64_t seed,
                                const PhaseSpaceState& init);
TrajectoryResult run_trajectory(const ModelParams& params, const RunSchedule& schedule, std::uint64_t seed,
                                const PhaseSpaceState& init);

struct InitialCondition {
  enum class Kind { CoherentX, DiscreteSampled };
  Kind kind = Kind::CoherentX;
  /// One 2x2 density matrix per site (DiscreteSampled only).
  std::vector<Matrix2> site_states;

  static InitialCondition coherent_x() { return {}; }
  static InitialCondition discrete(std::vector<Matrix2> rho) { return {Kind::DiscreteSampled, std::move(rho)}; }
};

/// Draws (or sets) the positive-P initial point. Throws SamplingError on
/// negative discrete weights.
PhaseSpaceState initial_state(const InitialCondition& ic, int n, std::mt19937_64& rng);

/// Diagonal discrete pairs of the default s=+1 spin-1/2 set with their weights for rho.
struct DiagonalPairs {
  std::array<Complex, 4> points;
  std::array<double, 4> weights;
};
DiagonalPairs diagonal_pairs(const Matrix2& rho, int site = 0);

struct EnsembleResult {
  int trajectories = 0;
  int sites = 0;
  std::vector<double> times;
  /// [trajectory][time][variable], variable in 0..2n-1 (psi then phi).
  std::vector<Complex> samples;
  /// [trajectory][time] cumulative projections.
  std::vector<std::uint64_t> jumps;
  std::vector<char> aborted;
  std::vector<std::string> abort_reasons;
  int abort_count = 0;

  Complex sample(int k, int t, int var) const {
    return samples[(static_cast<std::size_t>(k) * times.size() + t) * 2 * sites + var];
  }
  std::uint64_t jump(int k, int t) const { return jumps[static_cast<std::size_t>(k) * times.size() + t]; }
  double abort_fraction() const { return trajectories ? static_cast<double>(abort_count) / trajectories : 0.0; }
};

/// Trajectory k runs with trajectory_seed(master_seed, k); threads <= 0 uses
/// the hardware concurrency. Output does not depend on the thread count.
EnsembleResult run_ensemble(const ModelParams& params, const RunSchedule& schedule, const InitialCondition& ic,
                            int threads = 0);

/// Abort fraction above which run_ensemble logs a warning.
inline constexpr double kAbortWarnFraction = 1e-3;

}  // namespace phasespace
