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

#include <array>

#include "gqmp/symplectic.hpp"

namespace gqmp {

/// Two-mode covariance reduced by local symplectics to
///
///   [ m1  0   kx  0  ]
///   [ 0   m1  0   kp ]
///   [ kx  0   m2  0  ]
///   [ 0   kp  0   m2 ]
///
/// Canonical orientation: m1 <= m2 and kx >= |kp|.
struct TwoModeStandardForm {
  double m1 = 1.0;
  double m2 = 1.0;
  double kx = 0.0;
  double kp = 0.0;

  Matrix4 matrix() const;
};

/// The two Sp(4,R) congruence invariants of a 4x4 covariance.
struct TwoModeInvariants {
  double sum_sq;  // (1/2) tr(Omega V Omega^T V) = k1^2 + k2^2
  double det;     // det V = (k1 k2)^2
};

TwoModeInvariants two_mode_invariants(const Matrix& v4);

struct StandardFormResult {
  TwoModeStandardForm form;
  /// Per-mode symplectics in the input's mode order; diag(locals) V diag(locals)^T
  /// equals form.matrix(), with the two modes exchanged when `swapped`.
  std::array<Matrix2, 2> locals;
  bool swapped = false;
};

StandardFormResult standard_form(const Matrix& v4);

struct Couplings {
  double kx;
  double kp;
};

/// Unique couplings of the standard form with local parameters m1 <= m2 and
/// global parameters k1 <= k2. Throws incompatible-spectra when no real
/// solution exists.
Couplings solve_couplings(double m1, double m2, double k1, double k2);

/// The standard-form covariance with the given sorted spectra.
Matrix4 reconstruct_two_mode(double m1, double m2, double k1, double k2);

/// Williamson factor of a standard form: S diag(k1,k1,k2,k2) S^T = form.matrix()
/// with k1 <= k2. S does not mix positions with momenta: its position block A
/// satisfies A diag(k) A^T = [[m1,kx],[kx,m2]] and its momentum block is A^{-T}.
struct PairWilliamson {
  Matrix4 s;
  std::array<double, 2> kappa;
};

/// Works for either ordering of m1, m2; throws invalid-covariance unless the
/// form is positive definite.
PairWilliamson standard_form_williamson(const TwoModeStandardForm& form);

/// Beam splitter angle taking diag(aI, bI) to diagonal blocks
/// (target, a + b - target). theta lies in [0, pi/2].
double bs_param(double a, double b, double target);

/// Squeezing parameter raising both blocks of diag(aI, bI) by eps.
double sq_param(double a, double b, double eps);

enum class GeneratorKind { kBeamSplitter, kSqueezer };

struct BalancedDiagonalizer {
  GeneratorKind kind;
  double parameter;  // theta or mu
};

/// For |kx| = |kp| returns the single beam splitter (kp = kx) or squeezer
/// (kp = -kx) whose congruence diagonalizes form.matrix().
BalancedDiagonalizer diagonalize_balanced(const TwoModeStandardForm& form, double tol = 1e-9);

/// S with S diag(a,a,b,b) S^T having diagonal blocks t_a I and t_b I.
/// Throws infeasible-redistribution unless the sorted pairs obey
/// t1 + t2 >= a1 + a2 and t2 - t1 <= a2 - a1.
Matrix4 pair_factor(double a, double b, double t_a, double t_b);

/// Rotations with rot(left) * c * rot(right)^T = diag(s1, s2), s1 >= |s2|,
/// sign(s2) = sign(det c). rot(phi) = [[cos, -sin], [sin, cos]].
struct SignedSvd2 {
  double s1;
  double s2;
  double left;
  double right;
};

SignedSvd2 signed_svd2(const Matrix2& c);

Matrix2 rotation2(double phi);

}  // namespace gqmp
