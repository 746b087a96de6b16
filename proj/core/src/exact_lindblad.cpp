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


#include "phasespace/exact_lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasespace/errors.hpp"

namespace phasespace {

int DensityMatrix::sites() const {
  int n = 0;
  while ((1 << n) < rho.rows()) ++n;
  return n;
}

DensityMatrix DensityMatrix::product(const std::vector<Matrix2>& sites) {
  Matrix out = Matrix::Ones(1, 1);
  for (const auto& s : sites) {
    Matrix next(out.rows() * 2, out.cols() * 2);
    for (int i = 0; i < out.rows(); ++i)
      for (int j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * s;
    out = std::move(next);
  }
  return {out, 0.0};
}

DensityMatrix DensityMatrix::x_polarized(int n) {
  Matrix2 plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  return product(std::vector<Matrix2>(n, plus));
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  const int dim = 1 << n;
  return {Matrix::Identity(dim, dim) / static_cast<double>(dim), 0.0};
}

DensityMatrix::Violations DensityMatrix::violations() const {
  Violations v;
  v.hermiticity = (rho - rho.adjoint()).norm();
  v.trace = std::abs(rho.trace() - 1.0);
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  v.negativity = std::max(0.0, -es.eigenvalues().minCoeff());
  return v;
}

std::vector<DensityMatrix> evolve_exact(const ModelParams& params, const DensityMatrix& rho0,
                                        std::span<const double> t_out, const ExactOptions& opts) {
  if (!(opts.dt > 0.0)) throw InvalidParameter("exact step must be positive");
  const LindbladModel model = build_lindblad_model(params);
  const int dim = 1 << params.n;
  if (rho0.rho.rows() != dim || rho0.rho.cols() != dim)
    throw DimensionMismatch("initial state does not match the chain length");

  std::vector<DensityMatrix> out;
  out.reserve(t_out.size());
  Matrix rho = rho0.rho;
  double t = rho0.t;
  Matrix k1, k2, k3, k4;

  auto check = [&](bool full) {
    DensityMatrix d{rho, t};
    const double tr = std::abs(rho.trace() - 1.0);
    if (tr > opts.trace_tol)
      throw StepSizeError("trace drifted by " + std::to_string(tr) + " at t=" + std::to_string(t));
    if (full) {
      const auto v = d.violations();
      if (v.negativity > opts.positivity_tol)
        throw StepSizeError("negative eigenvalue " + std::to_string(-v.negativity) + " at t=" + std::to_string(t));
    }
  };

  for (double target : t_out) {
    if (target < t - 1e-12) throw InvalidParameter("output times must be sorted and not precede t0");
    while (t < target - 1e-12) {
      const double h = std::min(opts.dt, target - t);
      k1 = model.apply(rho);
      k2 = model.apply(rho + 0.5 * h * k1);
      k3 = model.apply(rho + 0.5 * h * k2);
      k4 = model.apply(rho + h * k3);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double anti = (rho - rho.adjoint()).norm();
      if (anti > opts.hermiticity_tol)
        throw StepSizeError("Hermiticity lost (" + std::to_string(anti) + ") at t=" + std::to_string(t));
      rho = 0.5 * (rho + rho.adjoint()).eval();
      t = (h == target - t) ? target : t + h;
      check(false);
    }
    check(true);
    out.push_back({rho, target});
  }
  return out;
}

PauliSum collective_spin(char axis, int n) {
  PauliSum s;
  for (int j = 0; j < n; ++j) s.terms.push_back({0.5 / n, PauliString{{{j, axis}}}});
  return s;
}

PauliSum collective_spin_squared(char axis, int n) {
  PauliSum s;
  const double w = 0.25 / (static_cast<double>(n) * n);
  s.terms.push_back({w * n, PauliString{}});
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) s.terms.push_back({w, PauliString{{{j, axis}, {k, axis}}}});
  return s;
}

double expectation(const Matrix& rho, const PauliString& op) {
  const auto dim = rho.rows();
  int n = 0;
  while ((1L << n) < dim) ++n;
  if ((1L << n) != dim || rho.cols() != dim) throw DimensionMismatch("density matrix is not 2^n square");

  long flip = 0;
  long zmask = 0;
  long ymask = 0;
  for (const auto& [site, axis] : op.factors) {
    if (site < 0 || site >= n) throw DimensionMismatch("Pauli factor outside the chain");
    const long bit = 1L << (n - 1 - site);
    switch (axis) {
      case 'x': case 'X': flip ^= bit; break;
      case 'y': case 'Y': flip ^= bit; ymask ^= bit; break;
      case 'z': case 'Z': zmask ^= bit; break;
      default: throw InvalidParameter(std::string("unknown Pauli axis ") + axis);
    }
  }
  // P|c> = lambda(c) |c ^ flip>, so tr(rho P) = sum_c rho(c, c^flip) lambda(c).
  const int ny = __builtin_popcountl(ymask);
  Complex acc = 0.0;
  for (long c = 0; c < dim; ++c) {
    // Y|0> = i|1>, Y|1> = -i|0>; Z|1> = -|1>.
    int minus = __builtin_popcountl(c & ymask) + __builtin_popcountl(c & zmask);
    Complex lambda = (minus % 2) ? -1.0 : 1.0;
    switch (ny % 4) {
      case 1: lambda *= kI; break;
      case 2: lambda *= -1.0; break;
      case 3: lambda *= -kI; break;
      default: break;
    }
    acc += rho(c, c ^ flip) * lambda;
  }
  if (std::abs(acc.imag()) > 1e-10) throw InvalidParameter("expectation of a Pauli string is not real; is rho Hermitian?");
  return acc.real();
}

double expectation(const Matrix& rho, const PauliSum& op) {
  double acc = 0.0;
  for (const auto& [w, s] : op.terms) acc += w * expectation(rho, s);
  return acc;
}

}  // namespace phasespace
