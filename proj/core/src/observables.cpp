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


#include "phasespace/observables.hpp"

#include <cmath>
#include <limits>

#include "phasespace/errors.hpp"

namespace phasespace {

Complex phase_observable(char axis, Complex psi, Complex phi, bool printed_sigma_y) {
  const Complex denom = 1.0 + psi * phi;
  if (std::abs(denom) < kPoleThreshold) throw PoleError(-1, "observable evaluated at a kernel pole");
  switch (axis) {
    case 'x': case 'X': return (psi + phi) / denom;
    case 'y': case 'Y': return (printed_sigma_y ? kI * (psi - phi) : kI * (phi - psi)) / denom;
    case 'z': case 'Z': return (1.0 - psi * phi) / denom;
    default: throw InvalidParameter(std::string("unknown spin axis '") + axis + "'");
  }
}

MeanError mean_and_error(std::span<const double> samples) {
  MeanError r;
  const auto m = static_cast<double>(samples.size());
  if (samples.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double sum = 0.0;
  for (double x : samples) sum += x;
  r.mean = sum / m;
  if (samples.size() < 2) {
    r.error = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  double ss = 0.0;
  for (double x : samples) ss += (x - r.mean) * (x - r.mean);
  r.error = std::sqrt(ss / (m - 1.0) / m);
  return r;
}

MeanError jackknife_variance(std::span<const double> second, std::span<const double> first) {
  if (second.size() != first.size()) throw DimensionMismatch("jackknife inputs differ in length");
  const std::size_t m = first.size();
  MeanError r;
  if (m == 0) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sa += second[k];
    sb += first[k];
  }
  const double md = static_cast<double>(m);
  r.mean = sa / md - (sb / md) * (sb / md);
  if (m < 2) {
    r.error = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  std::vector<double> loo(m);
  double avg = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double a = (sa - second[k]) / (md - 1.0);
    const double b = (sb - first[k]) / (md - 1.0);
    loo[k] = a - b * b;
    avg += loo[k];
  }
  avg /= md;
  double ss = 0.0;
  for (double v : loo) ss += (v - avg) * (v - avg);
  r.error = std::sqrt((md - 1.0) / md * ss);
  return r;
}

int ObservableSeries::index(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return static_cast<int>(k);
  throw InvalidParameter("unknown observable '" + name + "'");
}

ObservableSeries collective_estimates(const EnsembleResult& ensemble, bool printed_sigma_y) {
  const int n = ensemble.sites;
  const std::size_t nt = ensemble.times.size();
  ObservableSeries out;
  out.times = ensemble.times;
  out.names = kCollectiveNames;
  out.mean.assign(6, std::vector<double>(nt));
  out.error.assign(6, std::vector<double>(nt));
  out.mean_jumps.assign(nt, 0.0);
  out.aborted = ensemble.abort_count;

  std::vector<int> kept;
  for (int k = 0; k < ensemble.trajectories; ++k)
    if (!ensemble.aborted[k]) kept.push_back(k);
  out.trajectories = static_cast<int>(kept.size());

  const char axes[3] = {'x', 'y', 'z'};
  std::vector<double> s(kept.size()), ss(kept.size());
  std::vector<double> sigma(n);
  for (std::size_t t = 0; t < nt; ++t) {
    for (int a = 0; a < 3; ++a) {
      for (std::size_t q = 0; q < kept.size(); ++q) {
        const int k = kept[q];
        double total = 0.0;
        for (int j = 0; j < n; ++j) {
          sigma[j] = phase_observable(axes[a], ensemble.sample(k, static_cast<int>(t), j),
                                      ensemble.sample(k, static_cast<int>(t), n + j), printed_sigma_y)
                         .real();
          total += sigma[j];
        }
        double square = 0.0;
        for (int j = 0; j < n; ++j) square += sigma[j] * sigma[j];
        // sum_{j != k} sigma_j sigma_k = total^2 - sum_j sigma_j^2
        s[q] = total / (2.0 * n);
        ss[q] = (total * total - square + n) / (4.0 * n * n);
      }
      const MeanError first = mean_and_error(s);
      const MeanError var = jackknife_variance(ss, s);
      out.mean[a][t] = first.mean;
      out.error[a][t] = first.error;
      out.mean[3 + a][t] = var.mean;
      out.error[3 + a][t] = var.error;
    }
    double jumps = 0.0;
    for (int k : kept) jumps += static_cast<double>(ensemble.jump(k, static_cast<int>(t)));
    out.mean_jumps[t] = kept.empty() ? 0.0 : jumps / static_cast<double>(kept.size());
  }
  return out;
}

ObservableSeries exact_collective(const std::vector<DensityMatrix>& states) {
  ObservableSeries out;
  out.names = kCollectiveNames;
  out.mean.assign(6, {});
  out.error.assign(6, {});
  const char axes[3] = {'x', 'y', 'z'};
  for (const auto& st : states) {
    const int n = st.sites();
    out.times.push_back(st.t);
    for (int a = 0; a < 3; ++a) {
      const double s = expectation(st.rho, collective_spin(axes[a], n));
      const double s2 = expectation(st.rho, collective_spin_squared(axes[a], n));
      out.mean[a].push_back(s);
      out.mean[3 + a].push_back(s2 - s * s);
      out.error[a].push_back(0.0);
      out.error[3 + a].push_back(0.0);
    }
  }
  out.mean_jumps.assign(out.times.size(), 0.0);
  return out;
}

}  // namespace phasespace
