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

#include <complex>

#include <Eigen/Dense>

namespace phasespace {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Operator ordering label of a quasiprobability distribution.
/// Normal (+1) is the P-like ordering, AntiNormal (-1) the Q-like one.
enum class Ordering : int { AntiNormal = -1, Symmetric = 0, Normal = 1 };

constexpr Ordering dual(Ordering s) { return static_cast<Ordering>(-static_cast<int>(s)); }
constexpr int to_int(Ordering s) { return static_cast<int>(s); }

}  // namespace phasespace
