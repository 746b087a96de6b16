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
#include <vector>

#include "phasespace/types.hpp"

namespace phasespace {

/// Positive-P trajectory variables (psi_1..psi_n, phi_1..phi_n) at time t,
/// with per-site counts of discrete projections.
struct PhaseSpaceState {
  std::vector<Complex> psi;
  std::vector<Complex> phi;
  double t = 0.0;
  std::vector<std::uint64_t> jumps;

  PhaseSpaceState() = default;
  explicit PhaseSpaceState(int n) : psi(n), phi(n), jumps(n, 0) {}
  PhaseSpaceState(std::vector<Complex> psi_in, std::vector<Complex> phi_in)
      : psi(std::move(psi_in)), phi(std::move(phi_in)), jumps(psi.size(), 0) {}

  int sites() const { return static_cast<int>(psi.size()); }

  /// Packed phase-space vector (psi_1..psi_n, phi_1..phi_n).
  Complex& var(int index) { return index < sites() ? psi[index] : phi[index - sites()]; }
  Complex var(int index) const { return index < sites() ? psi[index] : phi[index - sites()]; }

  std::uint64_t total_jumps() const {
    std::uint64_t total = 0;
    for (auto j : jumps) total += j;
    return total;
  }
};

}  // namespace phasespace
