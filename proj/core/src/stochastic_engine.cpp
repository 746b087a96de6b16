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


#include "phasespace/stochastic_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include "phasespace/errors.hpp"
#include "phasespace/phase_kernels.hpp"

namespace phasespace {

void factorize_diffusion(std::span<const DiffusionTerm> terms, NoiseFactorization& out) {
  out.clear();
  for (const auto& t : terms) {
    if (t.i == t.j) {
      out.push_back({t.i, -1, std::sqrt(t.c), Complex(0.0)});
      continue;
    }
    const Complex plus = std::sqrt(0.5 * t.c);
    const Complex minus = std::sqrt(-0.5 * t.c);
    out.push_back({t.i, t.j, plus, plus});
    out.push_back({t.i, t.j, minus, -minus});
  }
}

NoiseFactorization factorize_diffusion(std::span<const DiffusionTerm> terms) {
  NoiseFactorization out;
  factorize_diffusion(terms, out);
  return out;
}

Matrix reconstruct_diffusion(const NoiseFactorization& columns, int dim) {
  Matrix d = Matrix::Zero(dim, dim);
  for (const auto& c : columns) {
    d(c.i, c.i) += c.bi * c.bi;
    if (c.j < 0) continue;
    d(c.j, c.j) += c.bj * c.bj;
    d(c.i, c.j) += c.bi * c.bj;
    d(c.j, c.i) += c.bi * c.bj;
  }
  return d;
}

int noise_dimension(const ChainDynamics& dynamics) {
  PhaseSpaceState probe(dynamics.sites());
  std::vector<DiffusionTerm> terms;
  dynamics.diffusion(probe, terms);
  int count = 0;
  for (const auto& t : terms) count += t.i == t.j ? 1 : 2;
  return count;
}

void em_step(PhaseSpaceState& z, const Vector& drift, const NoiseFactorization& columns, double dt,
             std::span<const double> noise) {
  const int dim = 2 * z.sites();
  if (drift.size() != dim) throw DimensionMismatch("drift size does not match the state");
  if (noise.size() < columns.size()) throw InvalidParameter("one noise draw per factorization column expected");
  for (int v = 0; v < dim; ++v) z.var(v) += drift(v) * dt;
  const double sdt = std::sqrt(dt);
  for (std::size_t m = 0; m < columns.size(); ++m) {
    const auto& c = columns[m];
    const double w = sdt * noise[m];
    z.var(c.i) += c.bi * w;
    if (c.j >= 0) z.var(c.j) += c.bj * w;
  }
  z.t += dt;
}

void em_step(PhaseSpaceState& z, const ChainDynamics& dynamics, double dt, std::span<const double> noise,
             StepWorkspace& ws) {
  dynamics.drift(z, ws.drift);
  dynamics.diffusion(z, ws.terms);
  factorize_diffusion(ws.terms, ws.columns);
  em_step(z, ws.drift, ws.columns, dt, noise);
}

PhaseSpaceState em_step(const PhaseSpaceState& z, const ModelParams& params, double dt,
                        std::span<const double> noise) {
  PhaseSpaceState out = z;
  StepWorkspace ws;
  em_step(out, ChainDynamics(params), dt, noise, ws);
  return out;
}

void RunSchedule::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidParameter("dt must be positive");
  if (!(t_max >= 0.0)) throw InvalidParameter("t_max must be nonnegative");
  if (trajectories < 1) throw InvalidParameter("at least one trajectory is required");
  if (!(z_max > 0.0)) throw InvalidParameter("z_max must be positive");
  if (!(eps >= 0.0)) throw InvalidParameter("eps must be nonnegative");
  for (std::size_t k = 0; k < t_out.size(); ++k) {
    if (t_out[k] < 0.0 || t_out[k] > t_max * (1.0 + 1e-12))
      throw InvalidParameter("output times must lie in [0, t_max]");
    if (k > 0 && !(t_out[k] > t_out[k - 1])) throw InvalidParameter("output times must be strictly increasing");
  }
}

std::vector<double> RunSchedule::uniform_times(double t_max, double step) {
  if (!(step > 0.0)) throw InvalidParameter("output step must be positive");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor(t_max / step + 1e-9));
  for (long k = 0; k <= count; ++k) out.push_back(std::min(t_max, k * step));
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

namespace {

TrajectoryRecord snapshot(const PhaseSpaceState& z, double t) {
  return {t, z.psi, z.phi, z.total_jumps()};
}

bool finite(const PhaseSpaceState& z) {
  for (int j = 0; j < z.sites(); ++j)
    if (!std::isfinite(std::abs(z.psi[j])) || !std::isfinite(std::abs(z.phi[j]))) return false;
  return true;
}

}  // namespace

TrajectoryResult run_trajectory(const ChainDynamics& dynamics, const RunSchedule& schedule, std::uint64_t seed,
                                const PhaseSpaceState& init) {
  schedule.validate();
  const int n = dynamics.sites();
  if (init.sites() != n) throw DimensionMismatch("initial state size does not match the chain length");

  TrajectoryResult out;
  PhaseSpaceState z = init;
  z.t = 0.0;
  if (z.jumps.size() != static_cast<std::size_t>(n)) z.jumps.assign(n, 0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> noise(noise_dimension(dynamics));
  StepWorkspace ws;
  const Spin12PointFamily base = spin12_family(0.0);
  ProjectionPolicy policy;
  policy.max_point_radius = schedule.z_max;
  policy.pair_margin = schedule.eps;

  auto abort = [&](const std::string& why) {
    out.aborted = true;
    out.abort_time = z.t;
    out.abort_reason = why;
  };

  auto regularize = [&]() -> bool {
    if (!finite(z) && !schedule.regularize) {
      abort("non-finite state");
      return false;
    }
    const auto flags = should_project(z, schedule.z_max, schedule.eps);
    for (int j = 0; j < n; ++j) {
      if (!flags[j]) continue;
      if (!schedule.regularize) {
        abort("site " + std::to_string(j) + " left the regular domain");
        return false;
      }
      try {
        const auto e = expand_kernel(z.psi[j], z.phi[j], base, policy);
        const auto [psi, phi] = sample_projection(e, uniform(rng));
        z.psi[j] = psi;
        z.phi[j] = phi;
        ++z.jumps[j];
      } catch (const Error& err) {
        abort("site " + std::to_string(j) + ": " + err.what());
        return false;
      }
    }
    return true;
  };

  const double tiny = 1e-12 * std::max(1.0, schedule.t_max);
  for (double target : schedule.t_out) {
    while (!out.aborted && z.t < target - tiny) {
      double h = schedule.dt;
      if (z.t + h > target - tiny) h = target - z.t;
      for (auto& x : noise) x = gauss(rng);
      try {
        em_step(z, dynamics, h, noise, ws);
      } catch (const Error& err) {
        abort(err.what());
        break;
      }
      if (std::abs(z.t - target) <= tiny) z.t = target;
      if (!regularize()) break;
    }
    if (out.aborted) break;
    z.t = target;
    out.records.push_back(snapshot(z, target));
  }
  out.site_jumps = z.jumps;
  return out;
}

TrajectoryResult run_trajectory(const ModelParams& params, const RunSchedule& schedule, std::uint64_t seed,
                                const PhaseSpaceState& init) {
  return run_trajectory(ChainDynamics(params), schedule, seed, init);
}

DiagonalPairs diagonal_pairs(const Matrix2& rho, int site) {
  static const PhasePointSet set = build_phase_point_set(2, Ordering::Normal);
  const DiscreteDistribution d = discrete_distribution(Matrix(rho), set);
  if (d.negative) throw SamplingError(site, "negative discrete P weights for site " + std::to_string(site));
  DiagonalPairs out;
  for (int k = 0; k < 4; ++k) {
    out.points[k] = kernel_label(Matrix2(set.dual[k]));
    out.weights[k] = d.normalized[k];
  }
  return out;
}

PhaseSpaceState initial_state(const InitialCondition& ic, int n, std::mt19937_64& rng) {
  PhaseSpaceState z(n);
  if (ic.kind == InitialCondition::Kind::CoherentX) {
    std::fill(z.psi.begin(), z.psi.end(), Complex(1.0));
    std::fill(z.phi.begin(), z.phi.end(), Complex(1.0));
    return z;
  }
  if (static_cast<int>(ic.site_states.size()) != n)
    throw DimensionMismatch("one density matrix per site expected");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const DiagonalPairs p = diagonal_pairs(ic.site_states[j], j);
    const double u = uniform(rng);
    double acc = 0.0;
    int pick = -1;
    for (int k = 0; k < 4; ++k) {
      if (p.weights[k] <= 0.0) continue;
      acc += p.weights[k];
      pick = k;
      if (u < acc) break;
    }
    z.psi[j] = std::conj(p.points[pick]);
    z.phi[j] = p.points[pick];
  }
  return z;
}

EnsembleResult run_ensemble(const ModelParams& params, const RunSchedule& schedule, const InitialCondition& ic,
                            int threads) {
  schedule.validate();
  const ChainDynamics dynamics(params);
  const int n = params.n;
  const int m = schedule.trajectories;

  EnsembleResult r;
  r.trajectories = m;
  r.sites = n;
  r.times = schedule.t_out;
  const std::size_t nt = r.times.size();
  r.samples.assign(static_cast<std::size_t>(m) * nt * 2 * n,
                   Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
  r.jumps.assign(static_cast<std::size_t>(m) * nt, 0);
  r.aborted.assign(m, 0);
  r.abort_reasons.assign(m, {});

  auto work = [&](int k) {
    const std::uint64_t seed = trajectory_seed(schedule.master_seed, static_cast<std::uint64_t>(k));
    std::mt19937_64 init_rng(splitmix64(seed ^ 0xd1b54a32d192ed03ULL));
    TrajectoryResult t;
    try {
      t = run_trajectory(dynamics, schedule, seed, initial_state(ic, n, init_rng));
    } catch (const SamplingError&) {
      throw;
    } catch (const Error& err) {
      t.aborted = true;
      t.abort_reason = err.what();
    }
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      const auto& rec = t.records[i];
      Complex* dst = &r.samples[(static_cast<std::size_t>(k) * nt + i) * 2 * n];
      std::copy(rec.psi.begin(), rec.psi.end(), dst);
      std::copy(rec.phi.begin(), rec.phi.end(), dst + n);
      r.jumps[static_cast<std::size_t>(k) * nt + i] = rec.jumps;
    }
    r.aborted[k] = t.aborted ? 1 : 0;
    r.abort_reasons[k] = t.abort_reason;
  };

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, m);
  if (threads == 1) {
    for (int k = 0; k < m; ++k) work(k);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (int k = next++; k < m; k = next++) {
          try {
            work(k);
          } catch (...) {
            std::lock_guard<std::mutex> g(failure_lock);
            if (!failure) failure = std::current_exception();
            next = m;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  r.abort_count = static_cast<int>(std::count(r.aborted.begin(), r.aborted.end(), 1));
  if (r.abort_fraction() > kAbortWarnFraction)
    std::clog << "warning: " << r.abort_count << " of " << m
              << " trajectories aborted and were excluded from the estimates\n";
  return r;
}

}  // namespace phasespace
