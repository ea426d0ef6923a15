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

// Constructive algorithms for the Gaussian marginal problem.
//
// jacobi_decompose drives a covariance to diagonal (Williamson) form by
// pairwise two-mode diagonalizations, monitoring the product of the local
// parameters. synthesize runs the converse: starting from diag(kappa) it
// applies at most n - 1 two-mode transformations (beam splitters, squeezers
// and one general pair factor) until the local parameters equal m.

#include <array>
#include <utility>
#include <span>
#include <vector>

#include "gqmp/error.hpp"
#include "gqmp/symplectic.hpp"

namespace gqmp {

struct JacobiStep {
  int j;
  int k;
  double off_norm_before;  // max-norm of the (j, k) block before the pivot
  double profit_after;     // prod_j sqrt(det block_j) after the pivot
  SpectralVector diag_after;  // sqrt(det block_j) per mode after the pivot
};

struct JacobiTrace {
  std::vector<JacobiStep> steps;
  SpectralVector initial_diag;  // local parameters of the input
  double initial_profit = 0.0;
  int sweeps = 0;
  bool converged = false;
};

struct JacobiResult {
  Matrix s;              // S V S^T is block diagonal with blocks kappa_j I
  SpectralVector kappa;  // sorted nondecreasing
  JacobiTrace trace;
};

class JacobiNonConvergence : public Error {
 public:
  explicit JacobiNonConvergence(JacobiResult partial)
      : Error(ErrorCode::kNonConvergence, "pairwise diagonalization exceeded the sweep limit"),
        partial_(std::move(partial)) {}

  const JacobiResult& partial() const noexcept { return partial_; }

 private:
  JacobiResult partial_;
};

/// Cyclic pairwise symplectic diagonalization. Each pivot rotates the pair's
/// off-diagonal block to diagonal with local rotations and then applies the
/// inverse of the pair's 4x4 Williamson factor. Converged when every
/// off-diagonal 2x2 block is below `tol` in max-norm.
JacobiResult jacobi_decompose(const Matrix& v, double tol = 1e-10, int max_sweeps = 60);

enum class StepKind { kBeamSplitter, kSqueezer, kGeneral };

const char* to_string(StepKind kind);

struct SynthesisStep {
  int stage;  // 1..4
  StepKind kind;
  int i;  // 0-based mode indices of the acting pair
  int j;
  /// theta for beam splitters, mu for squeezers, the 16 row-major entries of
  /// the 4x4 transformation for general steps.
  std::vector<double> params;
  double epsilon;  // amount moved into mode i
  bool fallback;   // rebuilt from the pair's actual 4x4 block
  SpectralVector diag_after;
};

struct SynthesisTrace {
  std::vector<SynthesisStep> steps;
  std::array<int, 4> stage_counts{};
  int ell = 0;  // leading modes fixed by the beam splitter stage
  int r = 0;    // squeezing steps
  double delta_initial = 0.0;  // sum(m) - sum(kappa)
  SpectralVector initial;      // kappa, sorted
};

struct SynthesisResult {
  Matrix s;  // V = S diag(kappa pairs) S^T
  Matrix v;
  SynthesisTrace trace;
};

/// Builds S in Sp(2n,R) such that S diag(kappa) S^T has local parameters m.
/// Both spectra are sorted nondecreasing first; mode slots follow that order.
SynthesisResult synthesize(std::span<const double> kappa, std::span<const double> m, double tol = 1e-9);

struct VerifyReport {
  double symplectic_residual = 0.0;  // max |S Omega S^T - Omega|
  double diagonal_residual = 0.0;    // sorted local parameters vs sorted m
  double isotropy_residual = 0.0;    // distance of diagonal blocks from multiples of I
  double spectrum_residual = 0.0;    // sorted symplectic spectrum vs sorted kappa
  bool symplectic_ok = false;
  bool diagonal_ok = false;
  bool spectrum_ok = false;

  bool ok() const { return symplectic_ok && diagonal_ok && spectrum_ok; }
};

/// Checks S against diag of the sorted kappa and the multiset m.
VerifyReport verify(const Matrix& s, std::span<const double> kappa, std::span<const double> m, double tol = 1e-8);

}  // namespace gqmp
