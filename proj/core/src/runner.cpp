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


#include "phasespace/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "phasespace/discrete_projection.hpp"
#include "phasespace/errors.hpp"
#include "phasespace/exact_lindblad.hpp"
#include "phasespace/phase_kernels.hpp"

#ifndef PHASESPACE_VERSION
#define PHASESPACE_VERSION "0.0.0"
#endif
#ifndef PHASESPACE_GIT_REV
#define PHASESPACE_GIT_REV ""
#endif

namespace phasespace {
namespace {

std::string normalize_key(std::string key) {
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

double parse_double(const std::string& field, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "field '" + field + "' expects a number, got '" + value + "'");
  }
}

long long parse_integer(const std::string& field, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "field '" + field + "' expects an integer, got '" + value + "'");
  }
}

std::uint64_t parse_unsigned(const std::string& field, const std::string& value) {
  try {
    std::size_t used = 0;
    if (!value.empty() && value.front() == '-') throw std::invalid_argument(value);
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "field '" + field + "' expects a nonnegative integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& field, std::string value) {
  std::transform(value.begin(), value.end(), value.begin(), [](unsigned char c) { return std::tolower(c); });
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError(field, "field '" + field + "' expects a boolean, got '" + value + "'");
}

std::string init_name(InitKind k) { return k == InitKind::CoherentX ? "coherent-x" : "discrete-mixed"; }

int to_int_checked(const std::string& field, long long v) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(field, "field '" + field + "' is out of range");
  return static_cast<int>(v);
}

nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

nlohmann::json config_json(const RunConfig& c) {
  const auto& p = c.params;
  const auto& s = c.schedule;
  return {{"mode", to_string(c.mode)},
          {"n", p.n},
          {"alpha", p.alpha},
          {"h", p.h},
          {"gamma1", p.gamma1},
          {"gamma2", p.gamma2},
          {"gamma3", p.gamma3},
          {"gamma4", p.gamma4},
          {"gammaD", p.gammaD},
          {"l4_minus", p.l4_minus},
          {"interaction", p.interaction},
          {"interaction_noise", p.interaction_noise},
          {"tmax", s.t_max},
          {"dt", s.dt},
          {"output_points", c.output_points},
          {"trajectories", s.trajectories},
          {"seed", s.master_seed},
          {"zmax", s.z_max},
          {"eps", s.eps},
          {"regularize", s.regularize},
          {"init", init_name(c.init)},
          {"sigma_y_printed", c.sigma_y_printed},
          {"out", c.out}};
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("out", "cannot open '" + path + "' for writing");
  f << contents;
  if (!f) throw ConfigError("out", "failed writing '" + path + "'");
}

std::string series_csv(const ObservableSeries& s) {
  std::ostringstream os;
  write_series_csv(os, s);
  return os.str();
}

DensityMatrix exact_initial(const RunConfig& c) {
  return c.init == InitKind::CoherentX ? DensityMatrix::x_polarized(c.params.n)
                                       : DensityMatrix::maximally_mixed(c.params.n);
}

InitialCondition stochastic_initial(const RunConfig& c) {
  if (c.init == InitKind::CoherentX) return InitialCondition::coherent_x();
  Matrix2 mixed = Matrix2::Identity() * 0.5;
  return InitialCondition::discrete(std::vector<Matrix2>(c.params.n, mixed));
}

nlohmann::json ensemble_json(const EnsembleResult& e) {
  nlohmann::json reasons = nlohmann::json::array();
  for (int k = 0; k < e.trajectories && reasons.size() < 10; ++k)
    if (e.aborted[k]) reasons.push_back({{"trajectory", k}, {"reason", e.abort_reasons[k]}});
  return {{"trajectories", e.trajectories},
          {"aborted", e.abort_count},
          {"abort_fraction", e.abort_fraction()},
          {"abort_warning", e.abort_fraction() > kAbortWarnFraction},
          {"first_aborts", reasons}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Random helpers for the validation suites.
Complex random_complex(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  return {g(rng), g(rng)};
}

PhaseSpaceState random_regular_state(std::mt19937_64& rng, int n, double scale, double margin) {
  PhaseSpaceState z(n);
  for (int j = 0; j < n; ++j) {
    do {
      z.psi[j] = random_complex(rng, scale);
      z.phi[j] = random_complex(rng, scale);
    } while (std::abs(1.0 + z.psi[j] * z.phi[j]) < margin);
  }
  return z;
}

Matrix2 pauli(char axis) {
  Matrix2 m;
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -kI, kI, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Validate: return "validate";
    case Mode::Exact: return "exact";
    case Mode::Simulate: return "simulate";
    case Mode::Compare: return "compare";
  }
  return "simulate";
}

Mode parse_mode(const std::string& text) {
  if (text == "validate") return Mode::Validate;
  if (text == "exact") return Mode::Exact;
  if (text == "simulate") return Mode::Simulate;
  if (text == "compare") return Mode::Compare;
  throw ConfigError("mode", "unknown mode '" + text + "' (validate | exact | simulate | compare)");
}

RunConfig::RunConfig() {
  schedule.t_max = 20.0;
  schedule.trajectories = 1000;
  schedule.master_seed = 1;
  finalize();
}

void RunConfig::finalize() {
  schedule.t_out.clear();
  if (output_points < 2) {
    schedule.t_out.push_back(schedule.t_max);
    return;
  }
  for (int k = 0; k < output_points; ++k)
    schedule.t_out.push_back(k + 1 == output_points ? schedule.t_max
                                                    : schedule.t_max * k / (output_points - 1));
}

void RunConfig::validate() const {
  auto wrap = [](const char* field, auto&& check) {
    try {
      check();
    } catch (const InvalidParameter& e) {
      throw ConfigError(field, std::string(field) + ": " + e.what());
    }
  };
  wrap("params", [&] { params.validate(); });
  wrap("schedule", [&] { schedule.validate(); });
  if (output_points < 1) throw ConfigError("output_points", "output_points must be >= 1");
  if ((mode == Mode::Exact || mode == Mode::Compare) && params.n > kMaxOracleSites)
    throw OracleScaleError("exact oracle refused: n=" + std::to_string(params.n) + " exceeds " +
                           std::to_string(kMaxOracleSites) + " sites");
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = normalize_key(raw_key);
  auto& p = c.params;
  auto& s = c.schedule;
  if (key == "mode") c.mode = parse_mode(value);
  else if (key == "n") p.n = to_int_checked(key, parse_integer(key, value));
  else if (key == "alpha") p.alpha = parse_double(key, value);
  else if (key == "h") p.h = parse_double(key, value);
  else if (key == "gamma1") p.gamma1 = parse_double(key, value);
  else if (key == "gamma2") p.gamma2 = parse_double(key, value);
  else if (key == "gamma3") p.gamma3 = parse_double(key, value);
  else if (key == "gamma4") p.gamma4 = parse_double(key, value);
  else if (key == "gammaD" || key == "gammad") p.gammaD = parse_double("gammaD", value);
  else if (key == "l4_minus") p.l4_minus = parse_bool(key, value);
  else if (key == "interaction") p.interaction = parse_bool(key, value);
  else if (key == "interaction_noise") p.interaction_noise = parse_bool(key, value);
  else if (key == "tmax" || key == "t_max") s.t_max = parse_double("tmax", value);
  else if (key == "dt") s.dt = parse_double(key, value);
  else if (key == "output_points") c.output_points = to_int_checked(key, parse_integer(key, value));
  else if (key == "trajectories") s.trajectories = to_int_checked(key, parse_integer(key, value));
  else if (key == "seed") s.master_seed = parse_unsigned(key, value);
  else if (key == "zmax" || key == "z_max") s.z_max = parse_double("zmax", value);
  else if (key == "eps") s.eps = parse_double(key, value);
  else if (key == "regularize") s.regularize = parse_bool(key, value);
  else if (key == "sigma_y_printed") c.sigma_y_printed = parse_bool(key, value);
  else if (key == "out") c.out = value;
  else if (key == "init") {
    if (value == "coherent-x") c.init = InitKind::CoherentX;
    else if (value == "discrete-mixed") c.init = InitKind::DiscreteMixed;
    else throw ConfigError("init", "unknown initial state '" + value + "' (coherent-x | discrete-mixed)");
  } else {
    throw ConfigError(key, "unknown configuration key '" + raw_key + "'");
  }
  c.finalize();
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      if (const auto eq = w.find('='); eq != std::string::npos && eq > 0) {
        tokens.push_back(w.substr(0, eq));
        tokens.push_back(w.substr(eq + 1));
      } else {
        tokens.push_back(w);
      }
    }
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t k = 0; k < tokens.size(); k += 2) {
    if (k + 1 >= tokens.size())
      throw ConfigError(normalize_key(tokens[k]), "configuration key '" + tokens[k] + "' has no value");
    out.emplace_back(tokens[k], tokens[k + 1]);
  }
  return out;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot read configuration file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  for (const auto& [k, v] : parse_config_text(ss.str())) apply_setting(base, k, v);
  return base;
}

std::string write_config(const RunConfig& c) {
  const auto& p = c.params;
  const auto& s = c.schedule;
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "--mode " << to_string(c.mode) << "\n"
     << "--n " << p.n << "\n"
     << "--alpha " << format_double(p.alpha) << "\n"
     << "--h " << format_double(p.h) << "\n"
     << "--gamma1 " << format_double(p.gamma1) << "\n"
     << "--gamma2 " << format_double(p.gamma2) << "\n"
     << "--gamma3 " << format_double(p.gamma3) << "\n"
     << "--gamma4 " << format_double(p.gamma4) << "\n"
     << "--gammaD " << format_double(p.gammaD) << "\n"
     << "--l4_minus " << b(p.l4_minus) << "\n"
     << "--interaction " << b(p.interaction) << "\n"
     << "--interaction_noise " << b(p.interaction_noise) << "\n"
     << "--tmax " << format_double(s.t_max) << "\n"
     << "--dt " << format_double(s.dt) << "\n"
     << "--output_points " << c.output_points << "\n"
     << "--trajectories " << s.trajectories << "\n"
     << "--seed " << s.master_seed << "\n"
     << "--zmax " << format_double(s.z_max) << "\n"
     << "--eps " << format_double(s.eps) << "\n"
     << "--regularize " << b(s.regularize) << "\n"
     << "--init " << init_name(c.init) << "\n"
     << "--sigma_y_printed " << b(c.sigma_y_printed) << "\n"
     << "--out " << c.out << "\n";
  return os.str();
}

int threads_from_env() {
  const char* v = std::getenv(kThreadsEnv);
  if (v == nullptr || *v == '\0') return 0;
  try {
    std::size_t used = 0;
    const int t = std::stoi(v, &used);
    if (used != std::string(v).size() || t < 0) throw std::invalid_argument(v);
    return t;
  } catch (const std::exception&) {
    throw ConfigError(kThreadsEnv, std::string(kThreadsEnv) + " must be a nonnegative integer");
  }
}

std::string version_string() {
  std::string v = PHASESPACE_VERSION;
  const std::string rev = PHASESPACE_GIT_REV;
  if (!rev.empty()) v += "-g" + rev;
  return v;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void write_series_csv(std::ostream& os, const ObservableSeries& s) {
  os << "t";
  for (const auto& name : s.names) os << ',' << name << "_mean," << name << "_se";
  os << ",jumps_mean\n";
  for (std::size_t t = 0; t < s.times.size(); ++t) {
    os << format_double(s.times[t]);
    for (std::size_t k = 0; k < s.names.size(); ++k)
      os << ',' << format_double(s.mean[k][t]) << ',' << format_double(s.error[k][t]);
    os << ',' << format_double(t < s.mean_jumps.size() ? s.mean_jumps[t] : 0.0) << '\n';
  }
}

ZScores compare_series(const ObservableSeries& exact, const ObservableSeries& stochastic) {
  if (exact.times.size() != stochastic.times.size())
    throw DimensionMismatch("exact and stochastic series have different time grids");
  ZScores z;
  z.times = exact.times;
  z.names = stochastic.names;
  for (std::size_t k = 0; k < stochastic.names.size(); ++k) {
    const auto& ex = exact.mean_of(stochastic.names[k]);
    std::vector<double> row(z.times.size());
    for (std::size_t t = 0; t < z.times.size(); ++t) {
      const double diff = stochastic.mean[k][t] - ex[t];
      const double se = stochastic.error[k][t];
      if (diff == 0.0) row[t] = 0.0;
      else if (!(se > 0.0)) row[t] = std::numeric_limits<double>::infinity();
      else row[t] = diff / se;
      if (std::isnan(stochastic.mean[k][t])) row[t] = std::numeric_limits<double>::quiet_NaN();
      const double a = std::isnan(row[t]) ? std::numeric_limits<double>::infinity() : std::abs(row[t]);
      if (stochastic.names[k].rfind("dS", 0) == 0) z.max_abs_second = std::max(z.max_abs_second, a);
      else z.max_abs_first = std::max(z.max_abs_first, a);
    }
    z.z.push_back(std::move(row));
  }
  return z;
}

std::vector<CheckResult> run_validation_suites(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  auto add = [&](std::string name, double value, double tol, std::string detail = {}) {
    out.push_back({std::move(name), value <= tol, value, tol, std::move(detail)});
  };

  {
    double worst = 0.0;
    for (int dim = 2; dim <= 5; ++dim)
      for (Ordering s : {Ordering::AntiNormal, Ordering::Symmetric, Ordering::Normal})
        worst = std::max(worst, check_axioms(build_phase_point_set(dim, s)).worst());
    add("phase-point axioms N=2..5", worst, 1e-10);
  }
  {
    double worst = 0.0, angle = 0.0;
    const double target = std::acos(-1.0 / 3.0);
    for (double phi : {0.0, std::numbers::pi / 7.0, std::numbers::pi / 3.0}) {
      const auto fam = spin12_family(phi);
      std::array<Eigen::Vector3d, 4> n;
      for (int k = 0; k < 4; ++k) {
        worst = std::max(worst, (fam.ops[k] - su2_kernel(fam.zpoints[k], Ordering::Symmetric)).norm());
        const Matrix2& a = fam.ops[k];
        n[k] = Eigen::Vector3d(2.0 * a(1, 0).real(), 2.0 * a(1, 0).imag(), (a(0, 0) - a(1, 1)).real()) /
               std::sqrt(3.0);
      }
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          angle = std::max(angle, std::abs(std::acos(std::clamp(n[i].dot(n[j]), -1.0, 1.0)) - target));
    }
    add("spin-1/2 family matches Wigner kernel", worst, 1e-12);
    add("tetrahedron angles", angle, 1e-12);
  }
  {
    double worst = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
      Matrix2 op;
      op << random_complex(rng, 1.0), random_complex(rng, 1.0), random_complex(rng, 1.0), random_complex(rng, 1.0);
      const Complex z = random_complex(rng, 1.0);
      for (Ordering s : {Ordering::AntiNormal, Ordering::Symmetric, Ordering::Normal}) {
        const Complex want = (op * su2_kernel(z, dual(s))).trace();
        worst = std::max(worst, std::abs(continuous_reconstruction(op, z, s) - want));
      }
    }
    add("continuous traciality", worst, 1e-6);
  }
  {
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) {
      const ModelParams p = ModelParams::reference(n);
      for (int trial = 0; trial < 5; ++trial)
        worst = std::max(worst, verify_generator(p, random_regular_state(rng, n, 0.6, 0.3)).residual);
    }
    add("generator consistency", worst, 1e-5);
  }
  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 1 + trial % 4;
      const PhaseSpaceState z = random_regular_state(rng, n, 0.8, 0.2);
      const auto terms = diffusion(z, ModelParams::reference(n));
      DriftDiffusion dd{Vector::Zero(2 * n), terms};
      const Matrix d = dd.dense_diffusion();
      worst = std::max(worst, (reconstruct_diffusion(factorize_diffusion(terms), 2 * n) - d).norm());
    }
    add("noise factorisation", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      Complex psi, phi;
      do {
        psi = random_complex(rng, 1.0);
        phi = random_complex(rng, 1.0);
      } while (std::abs(1.0 + psi * phi) < 0.1);
      const Matrix2 lam = positive_p_kernel(psi, phi).matrix;
      for (char a : {'x', 'y', 'z'}) {
        const Complex tr = (pauli(a) * lam).trace();
        worst = std::max(worst, std::abs(phase_observable(a, psi, phi) - tr) / std::max(1.0, std::abs(tr)));
      }
    }
    add("observable trace identity", worst, 1e-14);
  }
  {
    const ProjectionPolicy policy;
    const Spin12PointFamily base = spin12_family(0.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tried = 0, expanded = 0;
    double worst = 0.0;
    bool simplex = true;
    for (int trial = 0; trial < 200; ++trial) {
      const Complex psi = std::polar(policy.max_point_radius * u(rng), 2.0 * std::numbers::pi * u(rng));
      const Complex phi = std::polar(policy.max_point_radius * u(rng), 2.0 * std::numbers::pi * u(rng));
      if (std::abs(1.0 + psi * phi) < kPoleThreshold) continue;
      ++tried;
      try {
        const auto e = expand_kernel(psi, phi, base, policy);
        ++expanded;
        double sum = 0.0, neg = 0.0;
        Complex sz = 0.0;
        for (int k = 0; k < kPairCount; ++k) {
          sum += e.weights[k];
          neg = std::max(neg, -e.weights[k]);
          sz += e.weights[k] * phase_observable('z', ket_label(e.family, k / 4), bra_label(e.family, k % 4));
        }
        simplex = simplex && std::abs(sum - 1.0) <= 1e-10 && neg <= 0.0;
        worst = std::max({worst, e.residual, std::abs(sz - phase_observable('z', psi, phi))});
      } catch (const ExpansionFailure&) {
      }
    }
    std::ostringstream d;
    d << expanded << " of " << tried << " random kernels expanded";
    if (!simplex) d << "; a weight vector left the probability simplex";
    out.push_back({"returned expansions are valid", simplex && worst <= 1e-8, worst, 1e-8, d.str()});
  }
  {
    const ModelParams p = ModelParams::reference(2);
    const std::vector<double> t_out{0.5};
    const auto states = evolve_exact(p, DensityMatrix::x_polarized(2), t_out);
    const auto v = states.back().violations();
    add("exact evolution stays physical", std::max({v.hermiticity, v.trace, v.negativity}), 1e-8);
  }
  return out;
}

int run(const RunConfig& config, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  try {
    config.validate();
  } catch (const OracleScaleError& e) {
    log << "refused: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    log << "usage error [" << e.field() << "]: " << e.what() << "\n";
    return 2;
  }

  nlohmann::json meta{{"version", version_string()}, {"config", config_json(config)}};
  auto finish = [&](int status) {
    meta["exit_status"] = status;
    meta["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file(config.out + ".json", dump(meta));
    return status;
  };

  try {
    switch (config.mode) {
      case Mode::Validate: {
        const auto checks = run_validation_suites(config.schedule.master_seed);
        std::ostringstream report;
        bool ok = true;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks) {
          ok = ok && c.pass;
          report << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.value)
                 << " (tol " << format_double(c.tolerance) << ")";
          if (!c.detail.empty()) report << " " << c.detail;
          report << "\n";
          arr.push_back({{"name", c.name}, {"pass", c.pass}, {"value", number(c.value)},
                         {"tolerance", c.tolerance}, {"detail", c.detail}});
        }
        log << report.str();
        write_file(config.out + ".validate.txt", report.str());
        meta["checks"] = arr;
        return finish(ok ? 0 : 1);
      }
      case Mode::Exact: {
        const auto states = evolve_exact(config.params, exact_initial(config), config.schedule.t_out);
        const auto series = exact_collective(states);
        write_file(config.out + ".csv", series_csv(series));
        log << "exact series written to " << config.out << ".csv\n";
        return finish(0);
      }
      case Mode::Simulate:
      case Mode::Compare: {
        const int threads = threads_from_env();
        const auto ensemble =
            run_ensemble(config.params, config.schedule, stochastic_initial(config), threads);
        const auto series = collective_estimates(ensemble, config.sigma_y_printed);
        write_file(config.out + ".csv", series_csv(series));
        meta["ensemble"] = ensemble_json(ensemble);
        meta["mean_jumps_final"] = number(series.mean_jumps.empty() ? 0.0 : series.mean_jumps.back());
        log << "stochastic series written to " << config.out << ".csv (" << ensemble.abort_count << " of "
            << ensemble.trajectories << " trajectories aborted)\n";
        if (config.mode == Mode::Simulate) return finish(0);

        const auto states = evolve_exact(config.params, exact_initial(config), config.schedule.t_out);
        const auto exact = exact_collective(states);
        write_file(config.out + ".exact.csv", series_csv(exact));
        const ZScores z = compare_series(exact, series);
        std::ostringstream zs;
        zs << "t";
        for (const auto& n : z.names) zs << ',' << n << "_z";
        zs << '\n';
        for (std::size_t t = 0; t < z.times.size(); ++t) {
          zs << format_double(z.times[t]);
          for (const auto& row : z.z) zs << ',' << format_double(row[t]);
          zs << '\n';
        }
        write_file(config.out + ".zscores.csv", zs.str());
        const bool ok = z.max_abs_first <= 3.0 && z.max_abs_second <= 4.0;
        meta["max_abs_z_spin"] = number(z.max_abs_first);
        meta["max_abs_z_variance"] = number(z.max_abs_second);
        meta["comparison_pass"] = ok;
        log << "max |z| spin " << format_double(z.max_abs_first) << ", variance "
            << format_double(z.max_abs_second) << (ok ? " (pass)\n" : " (fail)\n");
        return finish(ok ? 0 : 1);
      }
    }
  } catch (const ConfigError& e) {
    log << "usage error [" << e.field() << "]: " << e.what() << "\n";
    return 2;
  } catch (const OracleScaleError& e) {
    log << "refused: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace phasespace
