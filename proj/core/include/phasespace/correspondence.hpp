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

#include <vector>

#include <Eigen/Sparse>

#include "phasespace/state.hpp"
#include "phasespace/types.hpp"

namespace phasespace {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Kac normalisation (sum_{j=1}^{n} j^{-alpha})^{-1}.
double kac_norm(double alpha, int n);

/// Dissipative long-range transverse-field Ising chain
///   H = sum_{j != k} J / (2 |j-k|^alpha) sx_j sx_k + h sum_j sz_j
/// with boundary jumps sqrt(g1) s+_1, sqrt(g2) s-_1, sqrt(g3) s+_n,
/// sqrt(g4) s+_n (s-_n when l4_minus) and bulk dephasing sqrt(gD) sz_j.
/// Conventions: |0> is the sz = +1 vacuum, s+ = |1><0|, s- = |0><1|.
struct ModelParams {
  int n = 5;
  double alpha = 1.5;
  double h = 1.0;
  double gamma1 = 0.2;
  double gamma2 = 0.02;
  double gamma3 = 0.1;
  double gamma4 = 0.05;
  double gammaD = 0.001;
  bool l4_minus = false;
  /// Switches used to isolate term families; the physical model has both on.
  bool interaction = true;
  /// When false the interaction enters only through the drift (semiclassical).
  bool interaction_noise = true;

  /// Reference chain parameters (the member defaults) at length n.
  static ModelParams reference(int n);

  /// Throws InvalidParameter on n < 1, alpha <= 0 or a negative rate.
  void validate() const;

  double J() const { return kac_norm(alpha, n); }
  /// J / |j-k|^alpha for zero-based sites j != k.
  double pair_coupling(int j, int k) const;
};

/// Symmetric diffusion entry D_ij = D_ji = c over packed variable indices.
struct DiffusionTerm {
  int i = 0;
  int j = 0;
  Complex c;
};

struct DriftDiffusion {
  Vector drift;
  std::vector<DiffusionTerm> terms;

  /// Dense complex-symmetric diffusion matrix of size 2n.
  Matrix dense_diffusion() const;
};

/// Drift and diffusion coefficients of the positive-P Fokker-Planck equation.
/// Couplings and per-site rates are precomputed once; evaluation is pure.
class ChainDynamics {
 public:
  explicit ChainDynamics(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  int sites() const { return params_.n; }

  /// Writes A(z) into out (size 2n). Throws PoleError naming the site.
  void drift(const PhaseSpaceState& z, Vector& out) const;
  /// Replaces out with the pair terms of D(z).
  void diffusion(const PhaseSpaceState& z, std::vector<DiffusionTerm>& out) const;

  /// Sigma^+ (pump) and sigma^- (decay) rates acting on a site.
  double pump_rate(int site) const { return pump_[site]; }
  double decay_rate(int site) const { return decay_[site]; }

 private:
  void check_poles(const PhaseSpaceState& z) const;

  ModelParams params_;
  Eigen::MatrixXd coupling_;
  std::vector<double> pump_;
  std::vector<double> decay_;
};

Vector drift(const PhaseSpaceState& z, const ModelParams& params);
std::vector<DiffusionTerm> diffusion(const PhaseSpaceState& z, const ModelParams& params);

/// Largest chain accepted by the dense oracles.
inline constexpr int kMaxOracleSites = 8;

/// Sparse Hamiltonian and jump operators on the 2^n Hilbert space.
/// Site 0 is the most significant tensor factor.
struct LindbladModel {
  int n = 0;
  SparseMatrix hamiltonian;
  std::vector<SparseMatrix> jumps;
  /// H - (i/2) sum L^dagger L
  SparseMatrix effective;

  /// -i[H, rho] + sum_mu (L rho L^dagger - {L^dagger L, rho} / 2)
  Matrix apply(const Matrix& rho) const;
};

/// Throws OracleScaleError for n > kMaxOracleSites.
LindbladModel build_lindblad_model(const ModelParams& params);

/// Single-site Pauli-type operator embedded at a site of an n-site chain.
SparseMatrix site_operator(const Matrix2& op, int site, int n);

/// Superoperator acting on column-stacked density matrices.
struct Liouvillian {
  int n = 0;
  SparseMatrix op;

  Matrix apply(const Matrix& rho) const;
};

Liouvillian build_liouvillian(const ModelParams& params);

/// Tensor product of the site kernels Lambda(psi_j, phi_j).
Matrix product_kernel(const PhaseSpaceState& z);

struct GeneratorReport {
  /// ||M1 - M2|| / ||M1|| (0 when both vanish).
  double residual = 0.0;
  /// Same residual with the finite-difference step halved.
  double residual_half_step = 0.0;
  double generator_norm = 0.0;
};

/// Compares the Liouvillian applied to the product kernel against
/// sum A_j d_j Lambda + 1/2 sum D_jk d_j d_k Lambda with central differences.
/// Throws PoleError when some |1 + psi_j phi_j| < pole_margin.
GeneratorReport verify_generator(const ModelParams& params, const PhaseSpaceState& z, double step = 1e-5,
                                 double pole_margin = 0.1);

}  // namespace phasespace
