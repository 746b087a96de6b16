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


#include "phasespace/phase_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

#include "phasespace/errors.hpp"
#include "quadrature.hpp"

namespace phasespace {
namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kResidualTol = 1e-12;
// Below this the vacuum orbit is treated as linearly dependent.
constexpr double kDegenerateTol = 1e-9;

void require_dim(int dim) {
  if (dim < 2) throw InvalidDimension("Hilbert dimension must be >= 2, got " + std::to_string(dim));
}

bool is_unitary(const Matrix& u) {
  if (u.rows() != u.cols()) return false;
  return (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).norm() <= kUnitaryTol;
}

std::vector<Matrix> orbit(const UnitarySet& frame, const Matrix& centre) {
  std::vector<Matrix> out;
  out.reserve(frame.ops.size());
  for (const auto& t : frame.ops) out.push_back(t * centre * t.adjoint());
  return out;
}

// Delta^{(+1)}_{0,0} from tr(P Q_{g,d}) = N delta_{(g,d),(0,0)}.
Matrix solve_normal_centre(const UnitarySet& frame, const std::vector<Matrix>& q_set) {
  const int n = frame.dim;
  const int n2 = n * n;
  Matrix system(n2, n2);
  for (int row = 0; row < n2; ++row)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) system(row, i * n + j) = q_set[row](j, i);
  Vector rhs = Vector::Zero(n2);
  rhs(0) = static_cast<double>(n);

  Eigen::FullPivLU<Matrix> lu(system);
  lu.setThreshold(kDegenerateTol);
  if (lu.rank() < n2) {
    throw DegenerateKernel(n, 1,
                           "traciality system is singular for N=" + std::to_string(n) +
                               ", s=+1 (vacuum orbit rank " + std::to_string(lu.rank()) + ")");
  }
  const Vector x = lu.solve(rhs);
  if ((system * x - rhs).norm() > kResidualTol * n2) {
    throw DegenerateKernel(n, 1, "traciality solve residual too large for N=" + std::to_string(n));
  }
  Matrix centre(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) centre(i, j) = x(i * n + j);
  return centre;
}

double ordering_scale(Ordering s) {
  switch (s) {
    case Ordering::AntiNormal: return 1.0;
    case Ordering::Symmetric: return std::sqrt(3.0);
    case Ordering::Normal: return 3.0;
  }
  return 0.0;
}

Matrix2 kernel_from_bloch(const Eigen::Vector3d& n, Ordering s) {
  const double c = ordering_scale(s);
  Matrix2 k;
  k(0, 0) = 0.5 * (1.0 + c * n.z());
  k(1, 1) = 0.5 * (1.0 - c * n.z());
  k(0, 1) = 0.5 * c * Complex(n.x(), -n.y());
  k(1, 0) = 0.5 * c * Complex(n.x(), n.y());
  return k;
}

// Bloch vector carried by su2_kernel(z, s): azimuth is -arg z.
Eigen::Vector3d kernel_bloch(Complex z) {
  const double r2 = std::norm(z);
  return Eigen::Vector3d(2.0 * z.real(), -2.0 * z.imag(), 1.0 - r2) / (1.0 + r2);
}

Complex kernel_point(const Eigen::Vector3d& n) { return Complex(n.x(), -n.y()) / (1.0 + n.z()); }

Matrix2 su2_from_rotation(const Eigen::Matrix3d& r) {
  const Eigen::Quaterniond q(r);
  Matrix2 u;
  // exp(-i theta n.sigma / 2) = w I - i (x sx + y sy + z sz)
  u(0, 0) = Complex(q.w(), -q.z());
  u(0, 1) = Complex(-q.y(), -q.x());
  u(1, 0) = Complex(q.y(), -q.x());
  u(1, 1) = Complex(q.w(), q.z());
  return u;
}

}  // namespace

double AxiomReport::worst() const { return std::max({hermiticity, trace, covariance, traciality}); }

UnitarySet build_weyl_ops(int dim) {
  require_dim(dim);
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / dim);
  Matrix shift = Matrix::Zero(dim, dim);
  Matrix clock = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    shift((k + 1) % dim, k) = 1.0;
    clock(k, k) = std::pow(omega, k);
  }
  UnitarySet set;
  set.dim = dim;
  set.ops.reserve(dim * dim);
  Matrix xa = Matrix::Identity(dim, dim);
  for (int a = 0; a < dim; ++a) {
    Matrix zb = Matrix::Identity(dim, dim);
    for (int b = 0; b < dim; ++b) {
      set.ops.push_back(xa * zb);
      zb = zb * clock;
    }
    xa = xa * shift;
  }
  return set;
}

UnitarySet rotate_frame(const UnitarySet& frame, const Matrix& rotation) {
  if (rotation.rows() != frame.dim || !is_unitary(rotation))
    throw InvalidRotation("frame rotation must be a unitary of the frame dimension");
  UnitarySet out;
  out.dim = frame.dim;
  out.ops.reserve(frame.ops.size());
  for (const auto& t : frame.ops) out.ops.push_back(rotation * t * rotation.adjoint());
  return out;
}

UnitarySet fiducial_frame(int dim) {
  require_dim(dim);
  const UnitarySet standard = build_weyl_ops(dim);
  if (dim == 2) {
    // Pi-rotations about the bisectors of the vacuum and the three outer
    // tetrahedron points are the rotated X, Z and Y.
    const Spin12PointFamily fam = spin12_family(0.0);
    const Eigen::Vector3d vac(0.0, 0.0, 1.0);
    const Eigen::Vector3d zp = (vac + kernel_bloch(fam.z(0, 1))).normalized();
    const Eigen::Vector3d xp = (vac + kernel_bloch(fam.z(1, 0))).normalized();
    const Eigen::Vector3d yp = zp.cross(xp);
    Eigen::Matrix3d r;
    r.col(0) = xp;
    r.col(1) = yp;
    r.col(2) = zp;
    return rotate_frame(standard, su2_from_rotation(r));
  }
  // Generic fiducial; every <f|T_ab|f> is bounded away from zero for N <= 16.
  Vector fid(dim);
  for (int k = 0; k < dim; ++k) fid(k) = (1.0 + 0.37 * k) * std::polar(1.0, 0.61 * k * k + 0.2 * k);
  fid.normalize();
  Matrix basis = Matrix::Identity(dim, dim);
  basis.col(0) = fid;
  Eigen::HouseholderQR<Matrix> qr(basis);
  const Matrix q = qr.householderQ();
  return rotate_frame(standard, q.adjoint());
}

std::vector<Matrix> vacuum_orbit(const UnitarySet& frame) {
  Matrix vac = Matrix::Zero(frame.dim, frame.dim);
  vac(0, 0) = 1.0;
  return orbit(frame, vac);
}

Matrix fourier_centre(const UnitarySet& frame, Ordering s) {
  const int n = frame.dim;
  const double p = -(1.0 + to_int(s));
  Matrix centre = Matrix::Zero(n, n);
  for (const auto& t : frame.ops) {
    const Complex q = std::conj(t(0, 0));
    const double mag = std::abs(q);
    if (mag < kDegenerateTol)
      throw DegenerateKernel(n, to_int(s),
                             "vacuum has vanishing Weyl characteristic for N=" + std::to_string(n) +
                                 ", s=" + std::to_string(to_int(s)));
    centre += q * std::pow(mag, p) * t;
  }
  return centre / static_cast<double>(n);
}

PhasePointSet build_phase_point_set(const UnitarySet& frame, Ordering s) {
  require_dim(frame.dim);
  PhasePointSet set;
  set.dim = frame.dim;
  set.s = s;
  set.frame = frame;
  switch (s) {
    case Ordering::AntiNormal:
    case Ordering::Normal: {
      auto q_set = vacuum_orbit(frame);
      auto p_set = orbit(frame, solve_normal_centre(frame, q_set));
      if (s == Ordering::AntiNormal) {
        set.ops = std::move(q_set);
        set.dual = std::move(p_set);
      } else {
        set.ops = std::move(p_set);
        set.dual = std::move(q_set);
      }
      break;
    }
    case Ordering::Symmetric:
      set.ops = orbit(frame, fourier_centre(frame, Ordering::Symmetric));
      set.dual = set.ops;
      break;
  }
  return set;
}

PhasePointSet build_phase_point_set(int dim, Ordering s) {
  return build_phase_point_set(fiducial_frame(dim), s);
}

AxiomReport check_axioms(const PhasePointSet& set) {
  AxiomReport r;
  const int n = set.dim;
  for (std::size_t k = 0; k < set.ops.size(); ++k) {
    for (const auto* ops : {&set.ops, &set.dual}) {
      const Matrix& d = (*ops)[k];
      r.hermiticity = std::max(r.hermiticity, (d - d.adjoint()).norm());
      r.trace = std::max(r.trace, std::abs(d.trace() - 1.0));
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          const Matrix& t = set.frame.at(mu, nu);
          const Matrix moved = t * set.at(a, b) * t.adjoint();
          r.covariance = std::max(r.covariance, (moved - set.at((a + mu) % n, (b + nu) % n)).norm());
        }
  for (std::size_t k = 0; k < set.ops.size(); ++k)
    for (std::size_t l = 0; l < set.dual.size(); ++l) {
      const Complex tr = (set.ops[k] * set.dual[l]).trace();
      const double expect = k == l ? static_cast<double>(n) : 0.0;
      r.traciality = std::max(r.traciality, std::abs(tr - expect));
    }
  return r;
}

Matrix2 su2_kernel(Complex z, Ordering s) { return kernel_from_bloch(kernel_bloch(z), s); }

Eigen::Vector3d bloch_vector(Complex z) {
  const double r2 = std::norm(z);
  return Eigen::Vector3d(2.0 * z.real(), 2.0 * z.imag(), 1.0 - r2) / (1.0 + r2);
}

Complex stereographic(const Eigen::Vector3d& n) {
  const double denom = 1.0 + n.z();
  if (denom <= 0.0) return {std::numeric_limits<double>::infinity(), 0.0};
  return Complex(n.x(), n.y()) / denom;
}

Spin12PointFamily spin12_family(double phi_rot, double tilt) {
  const Complex root23 = std::pow(Complex(-1.0, 0.0), 2.0 / 3.0);  // exp(2 pi i / 3)
  const Complex root13 = std::pow(Complex(-1.0, 0.0), 1.0 / 3.0);  // exp(i pi / 3)
  const Complex e = std::polar(1.0, phi_rot);
  const double s3 = std::sqrt(3.0);
  const double off = std::sqrt(2.0 / 3.0);
  const double top = (3.0 - s3) / 6.0;
  const double bottom = (3.0 + s3) / 6.0;

  Spin12PointFamily fam;
  fam.phi_rot = phi_rot;
  fam.tilt = tilt;
  fam.ops[0] << 0.5 * (1.0 + s3), 0.0, 0.0, 0.5 * (1.0 - s3);
  fam.ops[1] << top, off * e, off * std::conj(e), bottom;
  fam.ops[2] << top, root23 * off * e, -root13 * off * std::conj(e), bottom;
  fam.ops[3] << top, -root13 * off * e, root23 * off * std::conj(e), bottom;

  // z_{1,1} = -(-1)^{1/3} sqrt(2) e^{i phi}; the (-1)^{2/3} root misses A_{1,1}.
  const Complex r2 = std::sqrt(2.0) * e;
  fam.zpoints = {Complex(0.0, 0.0), r2, root23 * r2, -root13 * r2};

  if (tilt != 0.0) {
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(tilt, Eigen::Vector3d::UnitY()).toRotationMatrix();
    const Matrix2 u = su2_from_rotation(rot);
    for (int k = 0; k < 4; ++k) {
      fam.ops[k] = u * fam.ops[k] * u.adjoint();
      fam.zpoints[k] = kernel_point(rot * kernel_bloch(fam.zpoints[k]));
    }
  }
  return fam;
}

Complex kernel_label(const Matrix2& kernel) {
  const Eigen::Vector3d n(2.0 * kernel(1, 0).real(), 2.0 * kernel(1, 0).imag(),
                          (kernel(0, 0) - kernel(1, 1)).real());
  const double len = n.norm();
  if (!(len > 0.0)) throw DegenerateKernel(2, 0, "kernel has no Bloch direction");
  return kernel_point(n / len);
}

Matrix extended_kernel(const PhasePointSet& base, int alpha, int beta, const Matrix& rotation) {
  if (rotation.rows() != base.dim || !is_unitary(rotation))
    throw InvalidRotation("group element must be a unitary of dimension " + std::to_string(base.dim));
  return rotation * base.at(alpha, beta) * rotation.adjoint();
}

Complex weyl_symbol(const Matrix& op, const Matrix& kernel) {
  if (op.rows() != kernel.cols() || op.cols() != kernel.rows())
    throw DimensionMismatch("operator and kernel dimensions differ");
  return (op * kernel).trace();
}

PositivePKernel positive_p_kernel(Complex psi, Complex phi) {
  const Complex denom = 1.0 + psi * phi;
  if (std::abs(denom) < kPoleThreshold) throw PoleError(-1, "positive-P kernel evaluated at its pole");
  PositivePKernel k{psi, phi, Matrix2()};
  k.matrix << 1.0, phi, psi, psi * phi;
  k.matrix /= denom;
  return k;
}

DiscreteDistribution discrete_distribution(const Matrix& rho, const PhasePointSet& set) {
  if (rho.rows() != set.dim || rho.cols() != set.dim)
    throw DimensionMismatch("density matrix does not match phase-point dimension");
  DiscreteDistribution out;
  out.raw.reserve(set.ops.size());
  for (const auto& d : set.ops) out.raw.push_back((rho * d).trace().real());
  out.negative = std::any_of(out.raw.begin(), out.raw.end(), [](double w) { return w < -1e-12; });
  if (!out.negative) {
    double total = 0.0;
    for (double w : out.raw) total += std::max(w, 0.0);
    for (double w : out.raw) out.normalized.push_back(std::max(w, 0.0) / total);
  }
  return out;
}

Matrix reconstruct_operator(const std::vector<Complex>& symbols, const PhasePointSet& set) {
  if (symbols.size() != set.dual.size()) throw DimensionMismatch("one symbol per phase point expected");
  Matrix out = Matrix::Zero(set.dim, set.dim);
  for (std::size_t k = 0; k < symbols.size(); ++k) out += symbols[k] * set.dual[k];
  return out / static_cast<double>(set.dim);
}

Complex continuous_reconstruction(const Matrix2& op, Complex z, Ordering s, int polar_nodes,
                                  int azimuth_nodes) {
  const auto [nodes, weights] = detail::gauss_legendre(polar_nodes);
  const Matrix2 target = su2_kernel(z, dual(s));
  const double dphi = 2.0 * std::numbers::pi / azimuth_nodes;
  Complex acc = 0.0;
  for (int i = 0; i < polar_nodes; ++i) {
    const double ct = nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < azimuth_nodes; ++j) {
      const double ph = j * dphi;
      const Eigen::Vector3d n(st * std::cos(ph), st * std::sin(ph), ct);
      const Complex f = (op * kernel_from_bloch(n, dual(s))).trace();
      const Complex overlap = (kernel_from_bloch(n, s) * target).trace();
      acc += weights[i] * dphi * f * overlap;
    }
  }
  return acc * 2.0 / kSphereVolume;
}

}  // namespace phasespace
