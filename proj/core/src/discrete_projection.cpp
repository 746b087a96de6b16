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


#include "phasespace/discrete_projection.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "phasespace/errors.hpp"
#include "phasespace/nnls.hpp"

namespace phasespace {
namespace {

struct PreparedFamily {
  Spin12PointFamily family;
  std::array<Matrix2, kPairCount> pairs;
  /// Pairs whose labels sit within the pole margin never receive weight.
  std::array<bool, kPairCount> usable;
  Eigen::Matrix<double, 8, kPairCount> system;
};

PreparedFamily prepare(const Spin12PointFamily& family, double pair_margin) {
  PreparedFamily p{family, {}, {}, {}};
  for (int k = 0; k < kPairCount; ++k) {
    const Complex overlap = 1.0 + ket_label(family, k / 4) * bra_label(family, k % 4);
    p.usable[k] = std::abs(overlap) >= pair_margin;
    if (!p.usable[k]) {
      p.pairs[k].setZero();
      p.system.col(k).setZero();
      continue;
    }
    p.pairs[k] = pair_kernel(family, k / 4, k % 4);
    for (int e = 0; e < 4; ++e) {
      const Complex v = p.pairs[k](e / 2, e % 2);
      p.system(2 * e, k) = v.real();
      p.system(2 * e + 1, k) = v.imag();
    }
  }
  return p;
}

bool within_radius(const Spin12PointFamily& f, double radius) {
  for (const auto& z : f.zpoints)
    if (!(std::abs(z) <= radius)) return false;
  return true;
}

std::optional<DiscreteExpansion> solve(const Matrix2& target, const PreparedFamily& p,
                                       const ProjectionPolicy& policy) {
  Eigen::Matrix<double, 9, kPairCount> a;
  a.topRows<8>() = p.system;
  for (int k = 0; k < kPairCount; ++k) a(8, k) = p.usable[k] ? policy.normalization_weight : 0.0;
  Eigen::Matrix<double, 9, 1> b;
  for (int e = 0; e < 4; ++e) {
    b(2 * e) = target(e / 2, e % 2).real();
    b(2 * e + 1) = target(e / 2, e % 2).imag();
  }
  b(8) = policy.normalization_weight;

  const NnlsResult r = nnls(a, b);
  double sum = 0.0;
  DiscreteExpansion out;
  for (int k = 0; k < kPairCount; ++k) {
    double w = r.x(k);
    if (w < -1e-12 || !std::isfinite(w)) return std::nullopt;
    if (w < 0.0) w = 0.0;
    out.weights[k] = w;
    sum += w;
  }
  if (!(sum > 0.0)) return std::nullopt;
  Matrix2 mix = Matrix2::Zero();
  for (int k = 0; k < kPairCount; ++k) {
    out.weights[k] /= sum;
    mix += out.weights[k] * p.pairs[k];
  }
  out.residual = (mix - target).norm();
  out.family = p.family;
  if (!(out.residual <= policy.residual_tol)) return std::nullopt;
  return out;
}

bool default_search(const Spin12PointFamily& base, const ProjectionPolicy& policy) {
  const ProjectionPolicy d;
  return base.phi_rot == 0.0 && base.tilt == 0.0 && policy.max_point_radius == d.max_point_radius &&
         policy.azimuth_steps == d.azimuth_steps && policy.pair_margin == d.pair_margin && policy.tilt_steps == d.tilt_steps;
}

const std::vector<PreparedFamily>& default_prepared() {
  static const std::vector<PreparedFamily> cache = [] {
    std::vector<PreparedFamily> v;
    const ProjectionPolicy d;
    for (const auto& f : search_families(spin12_family(0.0), d)) v.push_back(prepare(f, d.pair_margin));
    return v;
  }();
  return cache;
}

}  // namespace

Complex ket_label(const Spin12PointFamily& family, int point) { return family.zpoints[point]; }

Complex bra_label(const Spin12PointFamily& family, int point) { return family.zpoints[point]; }

Matrix2 pair_kernel(const Spin12PointFamily& family, int ket, int bra) {
  return positive_p_kernel(ket_label(family, ket), bra_label(family, bra)).matrix;
}

std::vector<Spin12PointFamily> search_families(const Spin12PointFamily& base, const ProjectionPolicy& policy) {
  std::vector<Spin12PointFamily> out;
  const double pi = std::numbers::pi;
  for (int t = 0; t < policy.tilt_steps; ++t) {
    for (int a = 0; a < policy.azimuth_steps; ++a) {
      if (t == 0 && a == 0) continue;
      auto f = spin12_family(base.phi_rot + 2.0 * pi * a / policy.azimuth_steps,
                             base.tilt + pi * t / policy.tilt_steps);
      if (within_radius(f, policy.max_point_radius)) out.push_back(f);
    }
  }
  return out;
}

std::optional<DiscreteExpansion> try_expand(Complex psi, Complex phi, const Spin12PointFamily& family,
                                            const ProjectionPolicy& policy) {
  if (!std::isfinite(std::abs(psi)) || !std::isfinite(std::abs(phi))) return std::nullopt;
  const Matrix2 target = positive_p_kernel(psi, phi).matrix;
  return solve(target, prepare(family, policy.pair_margin), policy);
}

DiscreteExpansion expand_kernel(Complex psi, Complex phi, const Spin12PointFamily& family,
                                const ProjectionPolicy& policy) {
  if (!std::isfinite(std::abs(psi)) || !std::isfinite(std::abs(phi)))
    throw ExpansionFailure("kernel labels are not finite");
  const Matrix2 target = positive_p_kernel(psi, phi).matrix;
  if (auto e = solve(target, prepare(family, policy.pair_margin), policy)) return *e;

  if (default_search(family, policy)) {
    for (const auto& p : default_prepared())
      if (auto e = solve(target, p, policy)) return *e;
  } else {
    for (const auto& f : search_families(family, policy))
      if (auto e = solve(target, prepare(f, policy.pair_margin), policy)) return *e;
  }
  throw ExpansionFailure("no nonnegative discrete expansion for the kernel at psi=(" +
                         std::to_string(psi.real()) + "," + std::to_string(psi.imag()) + "), phi=(" +
                         std::to_string(phi.real()) + "," + std::to_string(phi.imag()) + ")");
}

int sample_pair(const DiscreteExpansion& expansion, double u) {
  double acc = 0.0;
  int last = -1;
  for (int k = 0; k < kPairCount; ++k) {
    if (expansion.weights[k] <= 0.0) continue;
    acc += expansion.weights[k];
    last = k;
    if (u < acc) return k;
  }
  return last;
}

std::pair<Complex, Complex> sample_projection(const DiscreteExpansion& expansion, double u) {
  const int k = sample_pair(expansion, u);
  return {ket_label(expansion.family, k / 4), bra_label(expansion.family, k % 4)};
}

std::vector<bool> should_project(const PhaseSpaceState& state, double z_max, double eps) {
  std::vector<bool> flags(state.sites(), false);
  for (int j = 0; j < state.sites(); ++j) {
    const Complex psi = state.psi[j];
    const Complex phi = state.phi[j];
    flags[j] = !(std::abs(psi) <= z_max) || !(std::abs(phi) <= z_max) || !(std::abs(1.0 + psi * phi) >= eps);
  }
  return flags;
}

}  // namespace phasespace
