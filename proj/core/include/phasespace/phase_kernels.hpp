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
#include <vector>

#include <Eigen/Dense>

#include "phasespace/types.hpp"

namespace phasespace {

/// A unitary realisation of the discrete Heisenberg-Weyl group of order N.
/// ops[alpha * dim + beta] holds T_{alpha,beta}.
struct UnitarySet {
  int dim = 0;
  std::vector<Matrix> ops;

  const Matrix& at(int alpha, int beta) const { return ops[alpha * dim + beta]; }
};

/// T_{alpha,beta} = X^alpha Z^beta with X the cyclic shift |k> -> |k+1> and
/// Z = diag(omega^k), omega = exp(2 pi i / N). Throws InvalidDimension for N < 2.
UnitarySet build_weyl_ops(int dim);

/// Rotated realisation T(U) = U T U^dagger. Throws InvalidRotation if U is not unitary.
UnitarySet rotate_frame(const UnitarySet& frame, const Matrix& rotation);

/// Rotated Weyl realisation whose vacuum orbit is non-degenerate, so that
/// every ordering can be built from it. For N = 2 the frame is chosen so that
/// the symmetric phase-point operators coincide with spin12_family(0).
UnitarySet fiducial_frame(int dim);

/// Q-type phase-point operators T_{alpha,beta} |0><0| T_{alpha,beta}^dagger.
std::vector<Matrix> vacuum_orbit(const UnitarySet& frame);

/// The N^2 phase-point operators of one ordering together with their
/// trace-dual set. Index layout follows UnitarySet.
struct PhasePointSet {
  int dim = 0;
  Ordering s = Ordering::Symmetric;
  std::vector<Matrix> ops;
  std::vector<Matrix> dual;
  UnitarySet frame;

  const Matrix& at(int alpha, int beta) const { return ops[alpha * dim + beta]; }
  const Matrix& dual_at(int alpha, int beta) const { return dual[alpha * dim + beta]; }
};

/// Phase-point set on fiducial_frame(dim).
PhasePointSet build_phase_point_set(int dim, Ordering s);

/// Phase-point set on an arbitrary Weyl realisation. The Q set is the vacuum
/// orbit; the P set is solved from traciality as a linear system; the
/// symmetric set is the self-dual Fourier midpoint. Throws DegenerateKernel
/// when the vacuum orbit does not span operator space.
PhasePointSet build_phase_point_set(const UnitarySet& frame, Ordering s);

/// Centre operator Delta^{(s)}_{0,0} from its Weyl-basis expansion
/// (1/N) sum_{ab} q_ab |q_ab|^{-(1+s)} T_ab, q_ab = <0|T_ab^dagger|0>.
/// Independent of the linear-system route used for the P set.
Matrix fourier_centre(const UnitarySet& frame, Ordering s);

/// Largest deviation from each of the four phase-point axioms.
struct AxiomReport {
  double hermiticity = 0.0;
  double trace = 0.0;
  double covariance = 0.0;
  double traciality = 0.0;

  double worst() const;
  bool ok(double tol) const { return worst() <= tol; }
};

AxiomReport check_axioms(const PhasePointSet& set);

/// SU(2) quantisation kernel at stereographic coordinate z (Wigner-kernel
/// convention: the (0,1) entry is proportional to z). Equals
/// (1/2)(I + c_s n.sigma) with c = 1, sqrt(3), 3 for s = -1, 0, +1.
Matrix2 su2_kernel(Complex z, Ordering s);

/// Unit Bloch vector of z = tan(theta/2) exp(i phi).
Eigen::Vector3d bloch_vector(Complex z);

/// Inverse of bloch_vector. The south pole maps to infinity.
Complex stereographic(const Eigen::Vector3d& n);

/// The explicit spin-1/2 phase-point operators A_{i,j} and their
/// phase-space points z_{i,j}, optionally tilted about the y axis.
/// Index layout: k = 2 i + j.
struct Spin12PointFamily {
  double phi_rot = 0.0;
  double tilt = 0.0;
  std::array<Matrix2, 4> ops;
  std::array<Complex, 4> zpoints;

  const Matrix2& A(int i, int j) const { return ops[2 * i + j]; }
  Complex z(int i, int j) const { return zpoints[2 * i + j]; }
};

Spin12PointFamily spin12_family(double phi_rot, double tilt = 0.0);

/// Point z with su2_kernel(z, s) proportional in its traceless part to `kernel`
/// (Bloch direction of the kernel, any ordering).
Complex kernel_label(const Matrix2& kernel);

/// Lambda(Omega) Delta^{(s)}_{alpha,beta} Lambda(Omega)^dagger.
Matrix extended_kernel(const PhasePointSet& base, int alpha, int beta, const Matrix& rotation);

/// tr(A kernel). Throws DimensionMismatch.
Complex weyl_symbol(const Matrix& op, const Matrix& kernel);

/// Normalised off-diagonal coherent-state kernel
/// (|0> + psi |1>)(<0| + phi <1|) / (1 + psi phi).
struct PositivePKernel {
  Complex psi;
  Complex phi;
  Matrix2 matrix;
};

/// Threshold on |1 + psi phi| below which the kernel is treated as a pole.
inline constexpr double kPoleThreshold = 1e-12;

PositivePKernel positive_p_kernel(Complex psi, Complex phi);

struct DiscreteDistribution {
  std::vector<double> raw;
  /// Raw weights clamped at zero and divided by their sum; empty when negative.
  std::vector<double> normalized;
  bool negative = false;
};

/// Weights tr(rho Delta^{(s)}_{alpha,beta}).
DiscreteDistribution discrete_distribution(const Matrix& rho, const PhasePointSet& set);

/// Inverse Weyl map A = (1/N) sum symbol_ab Delta^{(-s)}_ab for symbols taken
/// against set.ops.
Matrix reconstruct_operator(const std::vector<Complex>& symbols, const PhasePointSet& set);

/// Invariant volume of the SU(2) sphere under d mu = sin(theta) d theta d phi.
inline constexpr double kSphereVolume = 4.0 * 3.14159265358979323846;

/// Continuous reconstruction
///   f(z) = (N / Omega_N) \int d mu(z') f(z') tr(Delta^{(s)}(z') Delta^{(-s)}(z))
/// on a Gauss-Legendre x uniform product grid, where f(z') = tr(F Delta^{(-s)}(z')).
/// Returns the reconstructed value at z.
Complex continuous_reconstruction(const Matrix2& op, Complex z, Ordering s, int polar_nodes = 64,
                                  int azimuth_nodes = 64);

}  // namespace phasespace
