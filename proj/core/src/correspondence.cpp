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


#include "phasespace/correspondence.hpp"

#include <cmath>
#include <string>

#include "phasespace/errors.hpp"
#include "phasespace/phase_kernels.hpp"

namespace phasespace {
namespace {

SparseMatrix sparse_identity(int dim) {
  SparseMatrix id(dim, dim);
  id.setIdentity();
  return id;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()) * b.nonZeros());
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
          trip.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                            ia.value() * ib.value());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Matrix dense_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix2 pauli_x() { return (Matrix2() << 0, 1, 1, 0).finished(); }
Matrix2 pauli_z() { return (Matrix2() << 1, 0, 0, -1).finished(); }
Matrix2 raising() { return (Matrix2() << 0, 0, 1, 0).finished(); }   // |1><0|
Matrix2 lowering() { return (Matrix2() << 0, 1, 0, 0).finished(); }  // |0><1|

Matrix2 site_kernel(Complex psi, Complex phi) { return positive_p_kernel(psi, phi).matrix; }

}  // namespace

double kac_norm(double alpha, int n) {
  if (n < 1) throw InvalidParameter("kac_norm: n must be >= 1");
  if (!(alpha > 0.0)) throw InvalidParameter("kac_norm: alpha must be > 0");
  double sum = 0.0;
  for (int j = n; j >= 1; --j) sum += std::pow(static_cast<double>(j), -alpha);
  return 1.0 / sum;
}

ModelParams ModelParams::reference(int n) {
  ModelParams p;
  p.n = n;
  return p;
}

void ModelParams::validate() const {
  if (n < 1) throw InvalidParameter("n must be >= 1");
  if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
  if (!std::isfinite(h)) throw InvalidParameter("h must be finite");
  for (double g : {gamma1, gamma2, gamma3, gamma4, gammaD})
    if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidParameter("dissipation rates must be finite and >= 0");
}

double ModelParams::pair_coupling(int j, int k) const {
  return J() / std::pow(static_cast<double>(std::abs(j - k)), alpha);
}

Matrix DriftDiffusion::dense_diffusion() const {
  const auto dim = drift.size();
  Matrix d = Matrix::Zero(dim, dim);
  for (const auto& t : terms) {
    d(t.i, t.j) = t.c;
    d(t.j, t.i) = t.c;
  }
  return d;
}

ChainDynamics::ChainDynamics(const ModelParams& params) : params_(params) {
  params_.validate();
  const int n = params_.n;
  coupling_ = Eigen::MatrixXd::Zero(n, n);
  if (params_.interaction) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (j != k) coupling_(j, k) = params_.pair_coupling(j, k);
  }
  pump_.assign(n, 0.0);
  decay_.assign(n, 0.0);
  pump_[0] += params_.gamma1;
  decay_[0] += params_.gamma2;
  pump_[n - 1] += params_.gamma3;
  (params_.l4_minus ? decay_ : pump_)[n - 1] += params_.gamma4;
}

void ChainDynamics::check_poles(const PhaseSpaceState& z) const {
  for (int j = 0; j < params_.n; ++j)
    if (std::abs(1.0 + z.psi[j] * z.phi[j]) < kPoleThreshold)
      throw PoleError(j, "drift evaluated at the kernel pole on site " + std::to_string(j));
}

void ChainDynamics::drift(const PhaseSpaceState& z, Vector& out) const {
  const int n = params_.n;
  check_poles(z);
  out.resize(2 * n);
  const double h = params_.h;
  const double gd = params_.gammaD;

  // sigma^x symbols x_k = (psi_k + phi_k) / (1 + psi_k phi_k) feed the mean-field part.
  thread_local std::vector<Complex> sx;
  sx.resize(n);
  for (int k = 0; k < n; ++k) sx[k] = (z.psi[k] + z.phi[k]) / (1.0 + z.psi[k] * z.phi[k]);

  for (int j = 0; j < n; ++j) {
    const Complex psi = z.psi[j];
    const Complex phi = z.phi[j];
    const Complex pp = psi * phi;

    // -i[h sz, .] -> +2ih psi d_psi - 2ih phi d_phi
    Complex a_psi = 2.0 * kI * h * psi;
    Complex a_phi = -2.0 * kI * h * phi;

    Complex field = 0.0;
    for (int k = 0; k < n; ++k)
      if (k != j) field += coupling_(j, k) * sx[k];
    a_psi += -kI * (1.0 - psi * psi) * field;
    a_phi += kI * (1.0 - phi * phi) * field;

    // Common radial factor multiplying (psi d_psi + phi d_phi).
    Complex radial = 0.0;
    if (pump_[j] != 0.0) radial += pump_[j] * (3.0 + pp) / (2.0 + 2.0 * pp);
    // Decay enters with a minus sign (flow towards the vacuum psi = 0).
    if (decay_[j] != 0.0) radial -= decay_[j] * (1.0 + 3.0 * pp) / (2.0 + 2.0 * pp);
    if (gd != 0.0) radial += gd * (-2.0 + 2.0 * pp) / (1.0 + pp);

    out(j) = a_psi + radial * psi;
    out(n + j) = a_phi + radial * phi;
  }
}

void ChainDynamics::diffusion(const PhaseSpaceState& z, std::vector<DiffusionTerm>& out) const {
  const int n = params_.n;
  check_poles(z);
  out.clear();
  if (params_.interaction && params_.interaction_noise) {
    for (int j = 0; j < n; ++j) {
      const Complex fj = 1.0 - z.psi[j] * z.psi[j];
      const Complex gj = 1.0 - z.phi[j] * z.phi[j];
      for (int k = j + 1; k < n; ++k) {
        const double c = coupling_(j, k);
        out.push_back({j, k, -kI * c * fj * (1.0 - z.psi[k] * z.psi[k])});
        out.push_back({n + j, n + k, kI * c * gj * (1.0 - z.phi[k] * z.phi[k])});
      }
    }
  }
  const double gd = params_.gammaD;
  for (int j = 0; j < n; ++j) {
    if (pump_[j] == 0.0 && decay_[j] == 0.0 && gd == 0.0) continue;
    const Complex pp = z.psi[j] * z.phi[j];
    out.push_back({j, n + j, pump_[j] + decay_[j] * pp * pp + 4.0 * gd * pp});
  }
}

Vector drift(const PhaseSpaceState& z, const ModelParams& params) {
  Vector out;
  ChainDynamics(params).drift(z, out);
  return out;
}

std::vector<DiffusionTerm> diffusion(const PhaseSpaceState& z, const ModelParams& params) {
  std::vector<DiffusionTerm> out;
  ChainDynamics(params).diffusion(z, out);
  return out;
}

SparseMatrix site_operator(const Matrix2& op, int site, int n) {
  const SparseMatrix local = op.sparseView();
  SparseMatrix out = kron(sparse_identity(1 << site), local);
  return kron(out, sparse_identity(1 << (n - site - 1)));
}

Matrix LindbladModel::apply(const Matrix& rho) const {
  Matrix out = -kI * (effective * rho);
  out += kI * (effective * rho.adjoint()).adjoint();
  for (const auto& l : jumps) out += l * (l * rho.adjoint()).adjoint();
  return out;
}

LindbladModel build_lindblad_model(const ModelParams& params) {
  params.validate();
  const int n = params.n;
  if (n > kMaxOracleSites)
    throw OracleScaleError("dense oracle limited to n <= " + std::to_string(kMaxOracleSites) + ", got n=" +
                           std::to_string(n));
  const int dim = 1 << n;
  LindbladModel m;
  m.n = n;
  m.hamiltonian = SparseMatrix(dim, dim);
  std::vector<SparseMatrix> sx, sz;
  for (int j = 0; j < n; ++j) {
    sx.push_back(site_operator(pauli_x(), j, n));
    sz.push_back(site_operator(pauli_z(), j, n));
  }
  for (int j = 0; j < n; ++j) {
    m.hamiltonian += params.h * sz[j];
    if (!params.interaction) continue;
    for (int k = j + 1; k < n; ++k) {
      // The j<->k double sum with J / (2|j-k|^alpha) collapses to one term per pair.
      SparseMatrix xx = sx[j] * sx[k];
      m.hamiltonian += params.pair_coupling(j, k) * xx;
    }
  }
  auto add_jump = [&](double rate, const Matrix2& op, int site) {
    if (rate == 0.0) return;
    m.jumps.push_back(std::sqrt(rate) * site_operator(op, site, n));
  };
  add_jump(params.gamma1, raising(), 0);
  add_jump(params.gamma2, lowering(), 0);
  add_jump(params.gamma3, raising(), n - 1);
  add_jump(params.gamma4, params.l4_minus ? lowering() : raising(), n - 1);
  for (int j = 0; j < n; ++j) add_jump(params.gammaD, pauli_z(), j);

  m.effective = m.hamiltonian;
  for (const auto& l : m.jumps) {
    SparseMatrix ll = SparseMatrix(l.adjoint()) * l;
    m.effective -= Complex(0.0, 0.5) * ll;
  }
  m.hamiltonian.makeCompressed();
  m.effective.makeCompressed();
  return m;
}

Matrix Liouvillian::apply(const Matrix& rho) const {
  const auto dim = rho.rows();
  Eigen::Map<const Vector> v(rho.data(), dim * dim);
  Vector out = op * v;
  return Eigen::Map<Matrix>(out.data(), dim, dim);
}

Liouvillian build_liouvillian(const ModelParams& params) {
  const LindbladModel m = build_lindblad_model(params);
  const int dim = 1 << m.n;
  const SparseMatrix id = sparse_identity(dim);
  // vec(A rho B) = (B^T kron A) vec(rho)
  SparseMatrix heff_conj = SparseMatrix(m.effective.adjoint()).transpose();
  Liouvillian l;
  l.n = m.n;
  l.op = -kI * kron(id, m.effective) + kI * kron(heff_conj, id);
  for (const auto& j : m.jumps) {
    SparseMatrix jc = j.conjugate();
    l.op += kron(jc, j);
  }
  l.op.makeCompressed();
  return l;
}

Matrix product_kernel(const PhaseSpaceState& z) {
  Matrix out = Matrix::Ones(1, 1);
  for (int j = 0; j < z.sites(); ++j) out = dense_kron(out, site_kernel(z.psi[j], z.phi[j]));
  return out;
}

namespace {

// Lambda with selected site factors replaced.
Matrix kernel_with(const std::vector<Matrix2>& factors) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& f : factors) out = dense_kron(out, f);
  return out;
}

struct SiteDerivatives {
  Matrix2 d_psi, d_phi, d_psi_psi, d_phi_phi, d_psi_phi;
};

SiteDerivatives site_derivatives(Complex psi, Complex phi, double h) {
  SiteDerivatives d;
  const Matrix2 c = site_kernel(psi, phi);
  const Matrix2 pp = site_kernel(psi + h, phi), pm = site_kernel(psi - h, phi);
  const Matrix2 qp = site_kernel(psi, phi + h), qm = site_kernel(psi, phi - h);
  d.d_psi = (pp - pm) / (2.0 * h);
  d.d_phi = (qp - qm) / (2.0 * h);
  d.d_psi_psi = (pp - 2.0 * c + pm) / (h * h);
  d.d_phi_phi = (qp - 2.0 * c + qm) / (h * h);
  d.d_psi_phi = (site_kernel(psi + h, phi + h) - site_kernel(psi + h, phi - h) -
                 site_kernel(psi - h, phi + h) + site_kernel(psi - h, phi - h)) /
                (4.0 * h * h);
  return d;
}

Matrix fokker_planck_action(const ChainDynamics& dyn, const PhaseSpaceState& z, double h) {
  const int n = z.sites();
  std::vector<Matrix2> base(n);
  std::vector<SiteDerivatives> der(n);
  for (int j = 0; j < n; ++j) {
    base[j] = site_kernel(z.psi[j], z.phi[j]);
    der[j] = site_derivatives(z.psi[j], z.phi[j], h);
  }
  auto first = [&](int var) -> const Matrix2& {
    return var < n ? der[var].d_psi : der[var - n].d_phi;
  };
  auto site_of = [&](int var) { return var < n ? var : var - n; };

  Vector a;
  dyn.drift(z, a);
  std::vector<DiffusionTerm> terms;
  dyn.diffusion(z, terms);

  const int dim = 1 << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (int var = 0; var < 2 * n; ++var) {
    if (a(var) == 0.0) continue;
    auto f = base;
    f[site_of(var)] = first(var);
    out += a(var) * kernel_with(f);
  }
  for (const auto& t : terms) {
    auto f = base;
    const int si = site_of(t.i), sj = site_of(t.j);
    double weight = 1.0;  // D_ij and D_ji both contribute
    if (t.i == t.j) {
      weight = 0.5;
      f[si] = t.i < n ? der[si].d_psi_psi : der[si].d_phi_phi;
    } else if (si == sj) {
      f[si] = der[si].d_psi_phi;
    } else {
      f[si] = first(t.i);
      f[sj] = first(t.j);
    }
    out += weight * t.c * kernel_with(f);
  }
  return out;
}

}  // namespace

GeneratorReport verify_generator(const ModelParams& params, const PhaseSpaceState& z, double step,
                                 double pole_margin) {
  if (z.sites() != params.n) throw DimensionMismatch("state size does not match the chain length");
  for (int j = 0; j < z.sites(); ++j)
    if (std::abs(1.0 + z.psi[j] * z.phi[j]) < pole_margin)
      throw PoleError(j, "verification point too close to the kernel pole on site " + std::to_string(j));

  const ChainDynamics dyn(params);
  const Liouvillian l = build_liouvillian(params);
  const Matrix m1 = l.apply(product_kernel(z));

  GeneratorReport r;
  r.generator_norm = m1.norm();
  auto rel = [&](const Matrix& m2) {
    const double diff = (m1 - m2).norm();
    if (r.generator_norm == 0.0) return diff;
    return diff / r.generator_norm;
  };
  r.residual = rel(fokker_planck_action(dyn, z, step));
  r.residual_half_step = rel(fokker_planck_action(dyn, z, 0.5 * step));
  return r;
}

}  // namespace phasespace
