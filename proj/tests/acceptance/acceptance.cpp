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


// Acceptance report: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasespace/correspondence.hpp"
#include "phasespace/discrete_projection.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/exact_lindblad.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/phase_kernels.hpp"
#include "phasespace/runner.hpp"
#include "phasespace/stochastic_engine.hpp"

using namespace phasespace;

namespace {

constexpr double kAxiomTol = 1e-10;
constexpr double kFamilyTol = 1e-12;
constexpr double kAngleTol = 1e-12;
constexpr double kTracialityTol = 1e-6;
constexpr double kGeneratorTol = 1e-5;
constexpr double kSpinSigmas = 3.0;
constexpr double kVarianceSigmas = 4.0;
constexpr double kClosedFormTol = 1e-8;
constexpr double kSimplexTol = 1e-10;
constexpr double kResidualTol = 1e-8;
constexpr double kMonteCarloSigmas = 4.0;
constexpr double kSlope = 2.0;
constexpr double kSlopeTol = 0.5;
constexpr double kAbortBudget = 1e-3;

struct Outcome {
  bool pass = false;
  std::string summary;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

Complex random_complex(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  return {g(rng), g(rng)};
}

Matrix2 pauli(char axis) {
  Matrix2 m;
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// ---------------------------------------------------------------- 1
Outcome kernel_axioms() {
  double axioms = 0.0;
  for (int dim = 2; dim <= 5; ++dim)
    for (Ordering s : {Ordering::AntiNormal, Ordering::Symmetric, Ordering::Normal})
      axioms = std::max(axioms, check_axioms(build_phase_point_set(dim, s)).worst());

  double family = 0.0, angle = 0.0;
  const double target = std::acos(-1.0 / 3.0);
  for (double rot : {0.0, std::numbers::pi / 7.0, std::numbers::pi / 3.0}) {
    const auto f = spin12_family(rot);
    std::array<Eigen::Vector3d, 4> n;
    for (int k = 0; k < 4; ++k) {
      family = std::max(family, (f.ops[k] - su2_kernel(f.zpoints[k], Ordering::Symmetric)).norm());
      const Matrix2& a = f.ops[k];
      n[k] = Eigen::Vector3d(2.0 * a(1, 0).real(), 2.0 * a(1, 0).imag(), (a(0, 0) - a(1, 1)).real()).normalized();
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        angle = std::max(angle, std::abs(std::acos(std::clamp(n[i].dot(n[j]), -1.0, 1.0)) - target));
  }
  const bool ok = axioms <= kAxiomTol && family <= kFamilyTol && angle <= kAngleTol;
  return {ok, "axioms " + fmt(axioms) + " (tol " + fmt(kAxiomTol) + "), family " + fmt(family) + " (tol " +
                  fmt(kFamilyTol) + "), angles " + fmt(angle) + " (tol " + fmt(kAngleTol) + ")"};
}

// ---------------------------------------------------------------- 2
// Simpson in cos(theta) times a uniform azimuth rule integrates every
// quadratic in the Bloch components exactly.
Complex sphere_pairing(const Matrix2& a, const Matrix2& b, Ordering s) {
  const std::array<double, 3> u{-1.0, 0.0, 1.0};
  const std::array<double, 3> wu{1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0};
  const int azimuth = 8;
  Complex acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double st = std::sqrt(1.0 - u[i] * u[i]);
    for (int j = 0; j < azimuth; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / azimuth;
      const Eigen::Vector3d n(st * std::cos(ph), st * std::sin(ph), u[i]);
      const Complex z = n.z() > -1.0 + 1e-15 ? Complex(n.x(), -n.y()) / (1.0 + n.z()) : Complex(1e300, 0.0);
      Matrix2 ks, kd;
      if (n.z() > -1.0 + 1e-15) {
        ks = su2_kernel(z, s);
        kd = su2_kernel(z, dual(s));
      } else {
        // South pole: the kernels are diagonal there.
        const double cs = s == Ordering::Normal ? 3.0 : s == Ordering::Symmetric ? std::sqrt(3.0) : 1.0;
        const double cd = s == Ordering::Normal ? 1.0 : s == Ordering::Symmetric ? std::sqrt(3.0) : 3.0;
        ks << 0.5 * (1 - cs), 0, 0, 0.5 * (1 + cs);
        kd << 0.5 * (1 - cd), 0, 0, 0.5 * (1 + cd);
      }
      acc += wu[i] * (2.0 * std::numbers::pi / azimuth) * (a * ks).trace() * (b * kd).trace();
    }
  }
  return acc * 2.0 / (4.0 * std::numbers::pi);
}

Outcome continuous_traciality() {
  std::mt19937_64 rng(2);
  double identity = 0.0, reconstruction = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix2 a, b;
    a << random_complex(rng, 1.0), random_complex(rng, 1.0), random_complex(rng, 1.0), random_complex(rng, 1.0);
    b << random_complex(rng, 1.0), random_complex(rng, 1.0), random_complex(rng, 1.0), random_complex(rng, 1.0);
    const Complex z = random_complex(rng, 1.0);
    for (Ordering s : {Ordering::AntiNormal, Ordering::Symmetric, Ordering::Normal}) {
      identity = std::max(identity, std::abs(sphere_pairing(a, b, s) - (a * b).trace()));
      const Complex want = (a * su2_kernel(z, dual(s))).trace();
      reconstruction = std::max(reconstruction, std::abs(continuous_reconstruction(a, z, s) - want));
    }
  }
  const bool ok = identity <= kTracialityTol && reconstruction <= kTracialityTol;
  return {ok, "pairing identity " + fmt(identity) + ", reconstruction " + fmt(reconstruction) + " (tol " +
                  fmt(kTracialityTol) + ")"};
}

// ---------------------------------------------------------------- 3
std::vector<std::pair<std::string, ModelParams>> term_families(int n) {
  ModelParams none = ModelParams::reference(n);
  none.h = none.gamma1 = none.gamma2 = none.gamma3 = none.gamma4 = none.gammaD = 0.0;
  none.interaction = false;
  std::vector<std::pair<std::string, ModelParams>> out;
  auto with = [&](const std::string& name, auto&& set) {
    ModelParams p = none;
    set(p);
    out.emplace_back(name, p);
  };
  with("field", [](ModelParams& p) { p.h = 1.0; });
  with("interaction", [](ModelParams& p) { p.interaction = true; });
  with("pump", [](ModelParams& p) { p.gamma1 = 0.2; });
  with("decay", [](ModelParams& p) { p.gamma2 = 0.3; });
  with("collective", [](ModelParams& p) { p.gamma3 = 0.1; });
  with("pair+", [](ModelParams& p) { p.gamma4 = 0.05; });
  with("pair-", [](ModelParams& p) {
    p.gamma4 = 0.05;
    p.l4_minus = true;
  });
  with("dephasing", [](ModelParams& p) { p.gammaD = 0.2; });
  out.emplace_back("full", ModelParams::reference(n));
  ModelParams minus = ModelParams::reference(n);
  minus.l4_minus = true;
  out.emplace_back("full-", minus);
  return out;
}

Outcome generator_consistency() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  std::string where;
  int evaluated = 0;
  for (int n = 1; n <= 3; ++n) {
    for (const auto& [name, params] : term_families(n)) {
      for (int point = 0; point < 50; ++point) {
        PhaseSpaceState z(n);
        for (int j = 0; j < n; ++j) {
          do {
            z.psi[j] = random_complex(rng, 0.6);
            z.phi[j] = random_complex(rng, 0.6);
          } while (std::abs(1.0 + z.psi[j] * z.phi[j]) < 0.3);
        }
        const double r = verify_generator(params, z).residual;
        ++evaluated;
        if (!(r <= worst)) {
          worst = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
          where = name + " n=" + std::to_string(n);
        }
      }
    }
  }
  return {worst <= kGeneratorTol, "worst residual " + fmt(worst) + " at " + where + " over " +
                                      std::to_string(evaluated) + " points (tol " + fmt(kGeneratorTol) + ")"};
}

// ---------------------------------------------------------------- 4
struct SingleSpinCase {
  std::string name;
  ModelParams params;
  char axis;
  std::function<double(double)> closed_form;
};

struct SpinSeries {
  std::vector<double> mean, error;
  int aborted = 0;
  /// Every kept trajectory carries the same value at every time.
  bool noiseless = true;
};

SpinSeries single_spin_series(const SingleSpinCase& c, const RunSchedule& s) {
  const auto e = run_ensemble(c.params, s, InitialCondition::coherent_x(), threads_from_env());
  SpinSeries out;
  out.aborted = e.abort_count;
  for (std::size_t t = 0; t < e.times.size(); ++t) {
    std::vector<double> v;
    for (int k = 0; k < e.trajectories; ++k)
      if (!e.aborted[k])
        v.push_back(phase_observable(c.axis, e.sample(k, static_cast<int>(t), 0), e.sample(k, static_cast<int>(t), 1))
                        .real());
    if (!v.empty()) out.noiseless = out.noiseless && *std::max_element(v.begin(), v.end()) == v.front() &&
                                    *std::min_element(v.begin(), v.end()) == v.front();
    const MeanError me = mean_and_error(v);
    out.mean.push_back(me.mean);
    out.error.push_back(me.error);
  }
  return out;
}

Outcome single_spin_oracles() {
  auto bare = [] {
    ModelParams p = ModelParams::reference(1);
    p.h = p.gamma1 = p.gamma2 = p.gamma3 = p.gamma4 = p.gammaD = 0.0;
    return p;
  };
  const double dephasing = 0.25, decay = 0.5;
  std::vector<SingleSpinCase> cases;
  {
    ModelParams p = bare();
    p.h = 1.0;
    cases.push_back({"field", p, 'x', [](double t) { return std::cos(2.0 * t); }});
  }
  {
    ModelParams p = bare();
    p.gammaD = dephasing;
    cases.push_back({"dephasing", p, 'x', [=](double t) { return std::exp(-2.0 * dephasing * t); }});
  }
  {
    ModelParams p = bare();
    p.gamma2 = decay;
    cases.push_back({"decay", p, 'z', [=](double t) { return 1.0 - std::exp(-decay * t); }});
  }

  RunSchedule s;
  s.dt = 1e-3;
  s.t_max = 5.0;
  for (int k = 1; k <= 20; ++k) s.t_out.push_back(0.25 * k);
  s.trajectories = 10000;
  s.master_seed = 4;

  bool ok = true;
  std::ostringstream msg;
  double exact_worst = 0.0;
  for (const auto& c : cases) {
    const auto states = evolve_exact(c.params, DensityMatrix::x_polarized(1), s.t_out);
    for (const auto& st : states)
      exact_worst = std::max(exact_worst, std::abs(expectation(st.rho, PauliString{{{0, c.axis}}}) -
                                                   c.closed_form(st.t)));

    const SpinSeries a = single_spin_series(c, s);
    const bool deterministic = a.noiseless;
    // A noiseless ensemble has no sampling error; its uncertainty is the
    // time-step error, estimated as 2 |m(dt) - m(dt/2)|.
    std::vector<double> uncertainty = a.error;
    if (deterministic) {
      RunSchedule half = s;
      half.dt = s.dt / 2.0;
      const SpinSeries b = single_spin_series(c, half);
      for (std::size_t t = 0; t < uncertainty.size(); ++t) uncertainty[t] = 2.0 * std::abs(a.mean[t] - b.mean[t]);
    }
    double worst_ratio = 0.0, worst_diff = 0.0;
    bool case_ok = true;
    for (std::size_t t = 0; t < a.mean.size(); ++t) {
      const double diff = std::abs(a.mean[t] - c.closed_form(s.t_out[t]));
      const double tol = kSpinSigmas * uncertainty[t];
      const bool hit = diff <= tol;
      case_ok = case_ok && hit;
      worst_diff = std::max(worst_diff, std::isnan(diff) ? std::numeric_limits<double>::infinity() : diff);
      if (tol > 0.0) worst_ratio = std::max(worst_ratio, diff / tol * kSpinSigmas);
    }
    ok = ok && case_ok;
    msg << c.name << (case_ok ? " ok" : " FAILED") << " (max |diff| " << fmt(worst_diff) << ", max |z| "
        << fmt(worst_ratio);
    if (deterministic) msg << " against the step-error estimate of a noiseless ensemble";
    msg << ", aborted " << a.aborted << "/" << s.trajectories << "); ";
  }
  ok = ok && exact_worst <= kClosedFormTol;
  msg << "exact vs closed form " << fmt(exact_worst) << " (tol " << fmt(kClosedFormTol) << ")";
  return {ok, msg.str()};
}

// ---------------------------------------------------------------- 5
Outcome chain_comparison() {
  RunConfig c;
  c.params = ModelParams::reference(5);
  c.schedule.t_max = 20.0;
  c.schedule.trajectories = 1000;
  c.schedule.master_seed = 5;
  c.output_points = 201;
  c.finalize();
  const auto e = run_ensemble(c.params, c.schedule, InitialCondition::coherent_x(), threads_from_env());
  const auto stochastic = collective_estimates(e);
  const auto exact = exact_collective(evolve_exact(c.params, DensityMatrix::x_polarized(5), c.schedule.t_out));
  const ZScores z = compare_series(exact, stochastic);
  const bool ok = z.max_abs_first <= kSpinSigmas && z.max_abs_second <= kVarianceSigmas;
  std::ostringstream msg;
  msg << "max |z| spin " << fmt(z.max_abs_first) << " (tol " << kSpinSigmas << "), variance "
      << fmt(z.max_abs_second) << " (tol " << kVarianceSigmas << "); " << e.abort_count << "/" << e.trajectories
      << " trajectories aborted";
  if (e.abort_count > 0) {
    std::vector<double> when;
    for (int k = 0; k < e.trajectories; ++k)
      if (e.aborted[k]) {
        int last = -1;
        for (std::size_t t = 0; t < e.times.size(); ++t)
          if (!std::isnan(e.sample(k, static_cast<int>(t), 0).real())) last = static_cast<int>(t);
        when.push_back(last < 0 ? 0.0 : e.times[last]);
      }
    std::sort(when.begin(), when.end());
    msg << ", median last recorded time " << fmt(when[when.size() / 2]);
  }
  return {ok, msg.str()};
}

// ---------------------------------------------------------------- 6
Outcome projection_suite() {
  const ProjectionPolicy policy;
  const Spin12PointFamily base = spin12_family(0.0);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tried = 0, failed = 0, invalid = 0;
  double worst_sum = 0.0, worst_residual = 0.0, most_negative = 0.0;
  struct Expanded {
    Complex psi, phi;
    DiscreteExpansion expansion;
  };
  std::vector<Expanded> expanded;
  while (tried < 1000) {
    const Complex psi = std::polar(policy.max_point_radius * u(rng), 2.0 * std::numbers::pi * u(rng));
    const Complex phi = std::polar(policy.max_point_radius * u(rng), 2.0 * std::numbers::pi * u(rng));
    if (std::abs(1.0 + psi * phi) < kPoleThreshold) continue;
    ++tried;
    try {
      const auto e = expand_kernel(psi, phi, base, policy);
      double sum = 0.0;
      for (double w : e.weights) {
        sum += w;
        most_negative = std::min(most_negative, w);
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      worst_residual = std::max(worst_residual, e.residual);
      if (std::abs(sum - 1.0) > kSimplexTol || e.residual > kResidualTol) ++invalid;
      if (expanded.size() < 10) expanded.push_back({psi, phi, e});
    } catch (const ExpansionFailure&) {
      ++failed;
    }
  }

  // Monte-Carlo check of the sampled kernel mean.
  const int draws = 100000;
  double worst_sigma = 0.0;
  for (const auto& [psi, phi, e] : expanded) {
    Eigen::Matrix<double, 8, 1> sum = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 1> sq = Eigen::Matrix<double, 8, 1>::Zero();
    for (int d = 0; d < draws; ++d) {
      const auto [ket, bra] = sample_projection(e, u(rng));
      const Matrix2 k = positive_p_kernel(ket, bra).matrix;
      for (int q = 0; q < 4; ++q) {
        const Complex v = k(q / 2, q % 2);
        sum(2 * q) += v.real();
        sum(2 * q + 1) += v.imag();
        sq(2 * q) += v.real() * v.real();
        sq(2 * q + 1) += v.imag() * v.imag();
      }
    }
    const Matrix2 target = positive_p_kernel(psi, phi).matrix;
    for (int q = 0; q < 8; ++q) {
      const double mean = sum(q) / draws;
      const double sd = std::sqrt(std::max(0.0, sq(q) / draws - mean * mean) / draws);
      const Complex t = target(q / 4, (q / 2) % 2);
      const double want = q % 2 == 0 ? t.real() : t.imag();
      const double dev = std::abs(mean - want);
      if (dev > 1e-12) worst_sigma = std::max(worst_sigma, sd > 0.0 ? dev / sd : std::numeric_limits<double>::infinity());
    }
  }

  const bool ok = failed == 0 && invalid == 0 && most_negative >= 0.0 && worst_sigma <= kMonteCarloSigmas;
  std::ostringstream msg;
  msg << (tried - failed) << "/" << tried << " kernels expanded (" << failed << " with no nonnegative expansion); "
      << "returned: max |sum-1| " << fmt(worst_sum) << ", min weight " << fmt(most_negative) << ", max residual "
      << fmt(worst_residual) << "; Monte-Carlo worst " << fmt(worst_sigma) << " sigma over " << expanded.size()
      << " kernels x " << draws << " draws";
  return {ok, msg.str()};
}

// ---------------------------------------------------------------- 7
Outcome jump_statistics() {
  RunSchedule s;
  s.t_max = 50.0;
  for (int k = 0; k <= 50; ++k) s.t_out.push_back(k);
  s.trajectories = 1000;
  s.master_seed = 7;
  const auto e = run_ensemble(ModelParams::reference(5), s, InitialCondition::coherent_x(), threads_from_env());
  std::vector<double> x, y;
  for (std::size_t t = 0; t < e.times.size(); ++t) {
    if (e.times[t] < 5.0) continue;
    double sum = 0.0;
    int kept = 0;
    for (int k = 0; k < e.trajectories; ++k)
      if (!e.aborted[k]) {
        sum += static_cast<double>(e.jump(k, static_cast<int>(t)));
        ++kept;
      }
    if (kept == 0 || sum <= 0.0) continue;
    x.push_back(std::log(e.times[t]));
    y.push_back(std::log(sum / kept));
  }
  std::ostringstream msg;
  msg << e.abort_count << "/" << e.trajectories << " trajectories aborted; ";
  if (x.size() < 2) {
    msg << "no surviving jump counts in [5, 50] to fit";
    return {false, msg.str()};
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  msg << "log-log slope " << fmt(slope) << " (want " << kSlope << " +- " << kSlopeTol << ") over " << x.size()
      << " times";
  return {std::abs(slope - kSlope) <= kSlopeTol, msg.str()};
}

// ---------------------------------------------------------------- 8
std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no command-line binary given (--cli)"};
  const auto dir = std::filesystem::temp_directory_path() / "phasespace_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::string> outputs;
  const std::vector<int> threads{1, 1, 3};
  for (std::size_t r = 0; r < threads.size(); ++r) {
    const auto out = dir / ("determinism_" + std::to_string(r));
    const std::string cmd = std::string(kThreadsEnv) + "=" + std::to_string(threads[r]) + " '" + cli +
                            "' simulate --n 5 --tmax 2 --output-points 21 --trajectories 200 --seed 8 --out '" +
                            out.string() + "' > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status != 0) return {false, "simulate exited with status " + std::to_string(status)};
    outputs.push_back(slurp(out.string() + ".csv"));
  }
  const bool repeat = outputs[0] == outputs[1];
  const bool threaded = outputs[0] == outputs[2];
  return {repeat && threaded && !outputs[0].empty(),
          std::string("repeat ") + (repeat ? "identical" : "DIFFERS") + ", 1 vs 3 threads " +
              (threaded ? "identical" : "DIFFERS") + " (" + std::to_string(outputs[0].size()) + " bytes)"};
}

// ---------------------------------------------------------------- 9
Outcome long_chain_smoke() {
  RunConfig c;
  c.params = ModelParams::reference(20);
  c.schedule.t_max = 20.0;
  c.schedule.trajectories = 1000;
  c.schedule.master_seed = 9;
  c.output_points = 201;
  c.finalize();
  const auto e = run_ensemble(c.params, c.schedule, InitialCondition::coherent_x(), threads_from_env());
  const auto series = collective_estimates(e);
  bool finite = true;
  for (const auto& row : series.error)
    for (double v : row) finite = finite && std::isfinite(v);
  for (const auto& row : series.mean)
    for (double v : row) finite = finite && std::isfinite(v);
  const bool ok = e.abort_fraction() <= kAbortBudget && finite;
  std::ostringstream msg;
  msg << e.abort_count << "/" << e.trajectories << " aborted (budget " << fmt(100 * kAbortBudget)
      << "%), error bands " << (finite ? "finite" : "NOT finite") << " at all times";
  return {ok, msg.str()};
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  bool hard_budget;
  std::function<Outcome()> body;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phasespace acceptance report"};
  std::vector<int> only;
  std::string cli;
  app.add_option("--criterion", only, "criteria to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--cli", cli, "path to the phasespace command-line binary");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "kernel axioms", 1.0, true, kernel_axioms},
      {2, "continuous traciality", 10.0, true, continuous_traciality},
      {3, "generator consistency", 30.0, true, generator_consistency},
      {4, "single-spin oracles", 120.0, true, single_spin_oracles},
      {5, "n=5 chain against exact", 600.0, false, chain_comparison},
      {6, "projection suite", 60.0, true, projection_suite},
      {7, "jump statistics", 600.0, false, jump_statistics},
      {8, "determinism", 60.0, true, [&] { return determinism(cli); }},
      {9, "n=20 smoke run", 3600.0, false, long_chain_smoke},
  };

  bool all_ok = true;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double took = seconds_since(start);
    const bool in_time = took <= c.budget_seconds;
    const bool pass = o.pass && (in_time || !c.hard_budget);
    all_ok = all_ok && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.summary
              << "; runtime " << fmt(took) << " s (" << (c.hard_budget ? "limit " : "target ") << c.budget_seconds
              << " s" << (in_time ? "" : ", exceeded") << ")" << std::endl;
  }
  return all_ok ? 0 : 1;
}
