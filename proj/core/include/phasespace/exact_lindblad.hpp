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
#include <utility>
#include <vector>

#include "phasespace/correspondence.hpp"
#include "phasespace/types.hpp"

namespace phasespace {

/// Dense 2^n x 2^n state of the exact oracle.
struct DensityMatrix {
  Matrix rho;
  double t = 0.0;

  int sites() const;

  /// Product of single-site states, site 0 first.
  static DensityMatrix product(const std::vector<Matrix2>& sites);
  /// All spins along +x.
  static DensityMatrix x_polarized(int n);
  static DensityMatrix maximally_mixed(int n);

  /// Largest violation among Hermiticity, unit trace and -min eigenvalue.
  struct Violations {
    double hermiticity = 0.0;
    double trace = 0.0;
    double negativity = 0.0;
  };
  Violations violations() const;
};

struct ExactOptions {
  double dt = 1e-3;
  double hermiticity_tol = 1e-10;
  double trace_tol = 1e-10;
  double positivity_tol = 1e-8;
};

/// Classical RK4 on the Lindblad equation; output times are hit exactly by
/// shortening the last step before each one. The state is re-symmetrised
/// after every step. Throws StepSizeError if an invariant is violated.
std::vector<DensityMatrix> evolve_exact(const ModelParams& params, const DensityMatrix& rho0,
                                        std::span<const double> t_out, const ExactOptions& opts = {});

/// Tensor product of single-site Paulis, e.g. {{0,'x'},{3,'x'}}.
struct PauliString {
  std::vector<std::pair<int, char>> factors;
};

/// Weighted sum of Pauli strings.
struct PauliSum {
  std::vector<std::pair<double, PauliString>> terms;
};

/// S^a = (1/2n) sum_j sigma^a_j.
PauliSum collective_spin(char axis, int n);
/// S^a S^a expanded with (sigma^a_j)^2 = I.
PauliSum collective_spin_squared(char axis, int n);

/// Re tr(rho P). Throws DimensionMismatch and checks |Im| < 1e-10.
double expectation(const Matrix& rho, const PauliString& op);
double expectation(const Matrix& rho, const PauliSum& op);

}  // namespace phasespace
