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

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "phasespace/phase_kernels.hpp"
#include "phasespace/state.hpp"

namespace phasespace {

/// Number of (ket point, bra point) pairs of a spin-1/2 point family.
inline constexpr int kPairCount = 16;

/// Pair index = 4 * ket + bra, each point index k = 2 i + j of the family.
struct DiscreteExpansion {
  std::array<double, kPairCount> weights{};
  /// ||sum_k p_k Lambda_k - Lambda(psi, phi)||_F
  double residual = 0.0;
  Spin12PointFamily family;
};

/// Positive-P labels of a pair: psi' = z_ket and phi' = z_bra, both taken
/// verbatim from the family points.
Complex ket_label(const Spin12PointFamily& family, int point);
Complex bra_label(const Spin12PointFamily& family, int point);

/// Lambda(z_ket, z_bra) = |z_ket><conj z_bra| / (1 + z_ket z_bra).
Matrix2 pair_kernel(const Spin12PointFamily& family, int ket, int bra);

/// Search policy for expansion.
struct ProjectionPolicy {
  /// Points of a candidate family must satisfy |z| <= max_point_radius.
  double max_point_radius = 10.0 * 1.4142135623730951;
  int azimuth_steps = 16;
  int tilt_steps = 8;
  double residual_tol = 1e-8;
  /// Weight of the normalisation row appended to the matrix-match equations.
  double normalization_weight = 1e3;
  /// Pairs with |1 + psi' phi'| below this margin are excluded.
  double pair_margin = 0.1;
};

/// Expands Lambda(psi, phi) over the 16 pair kernels of `family`; if no
/// nonnegative solution exists, scans the azimuth and y-tilt of the family.
/// Throws ExpansionFailure when every candidate fails, PoleError at a pole.
DiscreteExpansion expand_kernel(Complex psi, Complex phi, const Spin12PointFamily& family,
                                const ProjectionPolicy& policy = {});

/// Single-family attempt; no rotation search.
std::optional<DiscreteExpansion> try_expand(Complex psi, Complex phi, const Spin12PointFamily& family,
                                            const ProjectionPolicy& policy = {});

/// Inverse-CDF draw in pair-index order; returns the (psi', phi') labels.
std::pair<Complex, Complex> sample_projection(const DiscreteExpansion& expansion, double u);

/// Pair index selected by sample_projection for draw u.
int sample_pair(const DiscreteExpansion& expansion, double u);

/// Site j is flagged iff |psi_j| > z_max, |phi_j| > z_max or |1 + psi_j phi_j| < eps
/// (non-finite entries are always flagged).
std::vector<bool> should_project(const PhaseSpaceState& state, double z_max, double eps);

/// Families tried by expand_kernel after the base family, in order.
std::vector<Spin12PointFamily> search_families(const Spin12PointFamily& base, const ProjectionPolicy& policy);

}  // namespace phasespace
