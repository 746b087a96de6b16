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


// phasespace: validate kernels, run the exact oracle, simulate positive-P
// ensembles, or compare the two.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasespace/errors.hpp"
#include "phasespace/runner.hpp"

namespace {

struct Flag {
  const char* name;
  const char* help;
};

// Value flags; each maps onto the config key of the same name.
const std::vector<Flag> kValueFlags{
    {"n", "number of spins"},
    {"alpha", "interaction range exponent"},
    {"h", "transverse field"},
    {"gamma1", "pump rate on the first spin"},
    {"gamma2", "decay rate on the first spin"},
    {"gamma3", "pump rate on the last spin"},
    {"gamma4", "extra rate on the last spin (pump, or decay with --l4-minus)"},
    {"gammaD", "dephasing rate on every spin"},
    {"tmax", "final time"},
    {"dt", "integration step"},
    {"output-points", "uniform output times over [0, tmax]"},
    {"trajectories", "stochastic trajectories"},
    {"seed", "master seed"},
    {"zmax", "projection threshold on |psi|, |phi|"},
    {"eps", "pole margin on |1 + psi phi|"},
    {"init", "initial state: coherent-x | discrete-mixed"},
    {"out", "output path prefix"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space simulation of dissipative spin chains"};
  // --h is the transverse field, so help is long-form only.
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", phasespace::version_string());

  std::string config_path;
  std::map<std::string, std::string> values;
  bool l4_minus = false, sigma_y_printed = false, no_regularize = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key/value configuration file")->check(CLI::ExistingFile);
    for (const auto& f : kValueFlags) sub->add_option(std::string("--") + f.name, values[f.name], f.help);
    sub->add_flag("--l4-minus", l4_minus, "last-spin extra channel is sigma- instead of sigma+");
    sub->add_flag("--sigma-y-printed", sigma_y_printed, "use the opposite-sign sigma_y symbol");
    sub->add_flag("--no-regularize", no_regularize, "disable discrete projection (domain exits abort)");
  };

  std::map<std::string, CLI::App*> subs;
  for (const char* mode : {"validate", "exact", "simulate", "compare"}) {
    subs[mode] = app.add_subcommand(mode);
    add_common(subs[mode]);
  }
  subs["validate"]->description("run the kernel, generator and projection invariant suites");
  subs["exact"]->description("integrate the dense Lindblad equation (n <= 8)");
  subs["simulate"]->description("run a positive-P trajectory ensemble");
  subs["compare"]->description("simulate and compare against the exact solution");

  CLI11_PARSE(app, argc, argv);

  try {
    phasespace::RunConfig config;
    if (!config_path.empty()) config = phasespace::load_config(config_path, config);
    for (const auto& [mode, sub] : subs) {
      if (!sub->parsed()) continue;
      config.mode = phasespace::parse_mode(mode);
      for (const auto& f : kValueFlags)
        if (sub->count(std::string("--") + f.name) > 0) phasespace::apply_setting(config, f.name, values[f.name]);
      if (sub->count("--l4-minus") > 0) config.params.l4_minus = l4_minus;
      if (sub->count("--sigma-y-printed") > 0) config.sigma_y_printed = sigma_y_printed;
      if (sub->count("--no-regularize") > 0) config.schedule.regularize = !no_regularize;
    }
    return phasespace::run(config, std::cerr);
  } catch (const phasespace::ConfigError& e) {
    std::cerr << "usage error [" << e.field() << "]: " << e.what() << "\n";
    return 2;
  } catch (const phasespace::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
