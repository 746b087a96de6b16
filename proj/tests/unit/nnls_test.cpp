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


#include <random>

#include <doctest.h>

#include "phasespace/nnls.hpp"

using phasespace::nnls;

namespace {

// Exhaustive active-set enumeration: the best feasible unconstrained solve over all supports.
Eigen::VectorXd brute_force(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n);
  double best_r = b.norm();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (mask >> j & 1) idx.push_back(j);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(k) = a.col(idx[k]);
    const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
    if (zs.minCoeff() < 0.0) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) x(idx[k]) = zs(k);
    const double r = (a * x - b).norm();
    if (r < best_r) {
      best_r = r;
      best = x;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("nnls: recovers an interior nonnegative solution") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 1, 2, 3;
  const auto r = nnls(a, b);
  CHECK(r.converged);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.x(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.residual < 1e-12);
}

TEST_CASE("nnls: clamps a coordinate whose unconstrained optimum is negative") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd b(2);
  b << -1.0, 2.0;
  const auto r = nnls(a, b);
  CHECK(r.x(0) == 0.0);
  CHECK(r.x(1) == doctest::Approx(2.0));
  CHECK(r.residual == doctest::Approx(1.0));
}

TEST_CASE("nnls: all-negative correlations give the zero vector") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::VectorXd b = -Eigen::VectorXd::Ones(3);
  const auto r = nnls(a, b);
  CHECK(r.converged);
  CHECK(r.x.norm() == 0.0);
}

TEST_CASE("nnls: matches exhaustive enumeration and satisfies KKT on random problems") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 4 + trial % 6;
    const int n = 2 + trial % 7;
    Eigen::MatrixXd a(m, n);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      b(i) = g(rng);
      for (int j = 0; j < n; ++j) a(i, j) = g(rng);
    }
    const auto r = nnls(a, b);
    REQUIRE(r.converged);
    CHECK(r.x.minCoeff() >= 0.0);
    const Eigen::VectorXd ref = brute_force(a, b);
    CHECK(r.residual <= (a * ref - b).norm() + 1e-10);
    const Eigen::VectorXd w = a.transpose() * (b - a * r.x);
    for (int j = 0; j < n; ++j) {
      CHECK(w(j) <= 1e-9);
      if (r.x(j) > 0.0) CHECK(std::abs(w(j)) < 1e-9);
    }
  }
}

TEST_CASE("nnls: wide underdetermined systems reach zero residual when feasible") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd a(4, 12);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 12; ++j) a(i, j) = u(rng) - 0.5;
    Eigen::VectorXd x0(12);
    for (int j = 0; j < 12; ++j) x0(j) = u(rng);
    const auto r = nnls(a, a * x0);
    CHECK(r.residual < 1e-10);
    CHECK(r.x.minCoeff() >= 0.0);
  }
}
