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

// Symplectic form, elementary two-mode generators and local normal form.
//
// All matrices use the mode ordering q1,p1,q2,p2,...,qn,pn. Mode indices in
// this library are 0-based; the command line tool reports them 1-based.
// The vacuum has covariance identity, so a state is physical when every
// symplectic eigenvalue is at least 1.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace gqmp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Matrix2 = Eigen::Matrix2d;
using Matrix4 = Eigen::Matrix4d;

/// Ordered list of per-mode spectral parameters (local m or global kappa).
using SpectralVector = std::vector<double>;

inline constexpr double kDefaultTol = 1e-10;

/// Block diagonal Omega with per-mode blocks [[0,1],[-1,0]].
Matrix symplectic_form(int n);

/// max |S Omega S^T - Omega|.
double symplectic_residual(const Matrix& s);

bool is_symplectic(const Matrix& s, double tol = kDefaultTol);

/// Inverse of a symplectic matrix, -Omega S^T Omega.
Matrix symplectic_inverse(const Matrix& s);

/// 4x4 beam splitter [[c I, s I], [-s I, c I]] on a mode pair.
Matrix4 beam_splitter(double theta);

/// 4x4 two-mode squeezer [[ch I, sh Z], [sh Z, ch I]] with Z = diag(1,-1).
Matrix4 squeezer(double mu);

/// Embeds a 4x4 pair transformation acting on modes (j, k) into 2n x 2n.
/// The first two rows/columns of `g` address mode j.
Matrix embed_pair(const Matrix4& g, int j, int k, int n);

Matrix beam_splitter_pair(double theta, int j, int k, int n);
Matrix squeezer_pair(double mu, int j, int k, int n);

/// In-place s <- G s for the pair transformation G on modes (j, k).
void apply_pair_left(Matrix& s, const Matrix4& g, int j, int k);

/// In-place v <- G v G^T for the pair transformation G on modes (j, k).
void apply_pair_congruence(Matrix& v, const Matrix4& g, int j, int k);

/// Extracts the 4x4 submatrix of modes (j, k).
Matrix4 pair_block(const Matrix& v, int j, int k);

/// Throws invalid-covariance unless v is square, even sized, symmetric and
/// positive definite.
void require_covariance(const Matrix& v, double tol = 1e-8);

int mode_count(const Matrix& v);

/// sqrt(det) of each diagonal 2x2 block, in mode order.
SpectralVector local_parameters(const Matrix& v);

struct LocalNormalForm {
  Matrix v;                      // L V L^T, diagonal blocks m_j I
  std::vector<Matrix2> locals;   // per-mode L_j in Sp(2,R)
  SpectralVector m;              // mode order, unsorted
};

/// Brings every diagonal block to m_j I with L_j = sqrt(m_j) B_j^{-1/2}.
LocalNormalForm local_normal_form(const Matrix& v);

/// True iff v is positive definite and its smallest symplectic eigenvalue
/// is at least 1 - tol.
bool check_physical(const Matrix& v, double tol = kDefaultTol);

struct RandomState {
  Matrix v;
  Matrix s;
  SpectralVector kappa;  // in the slot order used to build diag(kappa)
};

/// V = S diag(kappa pairs) S^T with kappa uniform in [kappa_min, kappa_max]
/// and S a seeded product of random beam splitters, squeezers and local
/// symplectics.
RandomState random_state(int n, std::uint64_t seed, double kappa_min = 1.0,
                         double kappa_max = 5.0);

}  // namespace gqmp
