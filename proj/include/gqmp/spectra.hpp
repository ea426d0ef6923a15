// Copyright 2026 The gqmp Authors
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
#include <vector>

#include "gqmp/symplectic.hpp"

namespace gqmp {

/// Symplectic eigenvalues of a positive definite covariance, nondecreasing.
SpectralVector symplectic_spectrum(const Matrix& v);

/// V = S diag(k1,k1,...,kn,kn) S^T with S symplectic and kappa nondecreasing.
struct WilliamsonFactorization {
  Matrix s;
  SpectralVector kappa;
};

/// Computes V^{1/2}, brings V^{1/2} Omega V^{1/2} to real canonical form by an
/// orthogonal O, and sets S = V^{1/2} O D^{-1/2}. Degenerate symplectic
/// eigenvalues leave S determined only up to a passive rotation inside the
/// degenerate subspace.
WilliamsonFactorization williamson(const Matrix& v);

/// Outcome of the dominance test between a global spectrum kappa and a local
/// spectrum m, both sorted nondecreasing before comparison.
struct DominanceCertificate {
  SpectralVector kappa_sorted;
  SpectralVector m_sorted;
  /// sum_{j<=k} m_j - sum_{j<=k} kappa_j for k = 1..n.
  std::vector<double> partial_sum_slacks;
  /// (kappa_n - sum_{j<n} kappa_j) - (m_n - sum_{j<n} m_j).
  double tail_slack = 0.0;
  bool compatible = false;
};

/// Tests whether kappa dominates m. Slacks down to -tol count as satisfied;
/// tol = 0 gives the exact inequalities. Physicality (kappa_1 >= 1) is not
/// part of this test.
DominanceCertificate dominates(std::span<const double> kappa, std::span<const double> m,
                               double tol = 0.0);

/// Geometric ratio xi = (p - 1) / (p + 1) of the thermal state with
/// covariance diag(p, p).
double thermal_ratio(double param);

struct ThermalEigenvalue {
  double value;
  std::vector<int> occupation;
};

/// The `count` largest eigenvalues of the product thermal state
/// prod_j (1 - xi_j) xi_j^{k_j}, descending, ties in lexicographic order of
/// the occupation numbers.
std::vector<ThermalEigenvalue> thermal_eigenvalues(std::span<const double> params, int count);

}  // namespace gqmp
