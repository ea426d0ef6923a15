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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gqmp/error.hpp"
#include "gqmp/marginal.hpp"
#include "gqmp/spectra.hpp"
#include "gqmp/symplectic.hpp"
#include "oracles.hpp"

using namespace gqmp;
using doctest::Approx;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kNumericalFailure;
}

Matrix canonical(const SpectralVector& kappa) {
  Vector d(2 * kappa.size());
  for (std::size_t j = 0; j < kappa.size(); ++j) d(2 * j) = d(2 * j + 1) = kappa[j];
  return d.asDiagonal();
}

double sum(const SpectralVector& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

double max_off_block(const Matrix& w) {
  const int n = static_cast<int>(w.rows() / 2);
  double out = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) out = std::max(out, w.block<2, 2>(2 * j, 2 * k).cwiseAbs().maxCoeff());
  return out;
}

const std::vector<double> kWorkedKappa{1, 2, 3, 4, 5, 12, 18};
const std::vector<double> kWorkedM{6, 7, 8, 9, 10, 11, 12};

}  // namespace

TEST_CASE("jacobi_decompose examples") {
  SUBCASE("already diagonal") {
    const JacobiResult r = jacobi_decompose(canonical({2, 1, 3}));
    CHECK(r.trace.steps.empty());
    CHECK(r.trace.converged);
    CHECK(r.s.isApprox(Matrix::Identity(6, 6)));
    CHECK(r.kappa == SpectralVector{1, 2, 3});
  }
  SUBCASE("single pivot") {
    Matrix v(4, 4);
    v << 2, 0, 1, 0, 0, 2, 0, 1, 1, 0, 2, 0, 0, 1, 0, 2;
    const JacobiResult r = jacobi_decompose(v);
    REQUIRE(r.trace.steps.size() == 1);
    CHECK(r.kappa[0] == Approx(1.0).epsilon(1e-12));
    CHECK(r.kappa[1] == Approx(3.0).epsilon(1e-12));
    CHECK(r.trace.initial_profit == Approx(4.0));
    CHECK(r.trace.steps[0].profit_after == Approx(3.0));
    CHECK(r.trace.steps[0].off_norm_before == Approx(1.0));
  }
  SUBCASE("errors") {
    CHECK(code_of([] { jacobi_decompose(0.5 * Matrix::Identity(4, 4)); }) == ErrorCode::kInvalidCovariance);
    const Matrix v = random_state(4, 3, 1.0, 3.0).v;
    try {
      jacobi_decompose(v, 1e-30, 2);
      FAIL("expected non-convergence");
    } catch (const JacobiNonConvergence& e) {
      CHECK(e.code() == ErrorCode::kNonConvergence);
      CHECK_FALSE(e.partial().trace.converged);
    }
  }
}

TEST_CASE("jacobi_decompose properties") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const Matrix v = random_state(n, 800 + seed, 1.0, 5.0).v;
    const JacobiResult r = jacobi_decompose(v);
    CHECK(r.trace.converged);
    const Matrix w = r.s * v * r.s.transpose();
    CHECK(max_off_block(w) < 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff()));
    const double scale = std::max(1.0, r.s.squaredNorm());
    CHECK(symplectic_residual(r.s) < 1e-9 * scale);
    const std::vector<double> oracle_k = oracle::symplectic_eigenvalues(v);
    for (int j = 0; j < n; ++j) CHECK(r.kappa[j] == Approx(oracle_k[j]).epsilon(1e-8));

    double prev = r.trace.initial_profit;
    SpectralVector prev_diag = r.trace.initial_diag;
    for (const JacobiStep& step : r.trace.steps) {
      if (step.off_norm_before > 1e-10) CHECK(step.profit_after < prev + 1e-12 * prev);
      CHECK(dominates(step.diag_after, prev_diag, 1e-9 * sum(prev_diag)).compatible);
      prev = step.profit_after;
      prev_diag = step.diag_after;
    }
    CHECK(prev == Approx(std::sqrt(v.determinant())).epsilon(1e-8));
  }
}

TEST_CASE("synthesize worked 7-mode example") {
  const SynthesisResult r = synthesize(kWorkedKappa, kWorkedM);
  const std::vector<SpectralVector> chain{{6, 2, 3, 4, 5, 7, 18},  {6, 7, 3, 4, 5, 2, 18},
                                          {6, 7, 8, 4, 5, 2, 23},  {6, 7, 8, 9, 5, 2, 26},
                                          {6, 7, 8, 9, 10, 2, 21}, {6, 7, 8, 9, 10, 11, 12}};
  REQUIRE(r.trace.steps.size() == chain.size());
  for (std::size_t s = 0; s < chain.size(); ++s)
    for (int j = 0; j < 7; ++j) CHECK(r.trace.steps[s].diag_after[j] == Approx(chain[s][j]).epsilon(1e-12));
  CHECK(r.trace.stage_counts == std::array<int, 4>{2, 1, 1, 2});
  CHECK(r.trace.initial == SpectralVector(kWorkedKappa));
  CHECK(r.trace.ell == 2);
  CHECK(r.trace.r == 1);
  CHECK(r.trace.delta_initial == Approx(18.0));
  const std::vector<StepKind> kinds{StepKind::kBeamSplitter, StepKind::kBeamSplitter, StepKind::kSqueezer,
                                    StepKind::kGeneral,      StepKind::kBeamSplitter, StepKind::kBeamSplitter};
  for (std::size_t s = 0; s < kinds.size(); ++s) CHECK(r.trace.steps[s].kind == kinds[s]);
  CHECK(r.trace.steps[3].params.size() == 16);
  CHECK(verify(r.s, kWorkedKappa, kWorkedM).ok());
  const SpectralVector m = local_parameters(r.v);
  for (int j = 0; j < 7; ++j) CHECK(m[j] == Approx(kWorkedM[j]).epsilon(1e-12));
}

TEST_CASE("synthesize small cases") {
  SUBCASE("m equals kappa") {
    const SynthesisResult r = synthesize(kWorkedM, kWorkedM);
    CHECK(r.trace.steps.empty());
    CHECK(r.s.isApprox(Matrix::Identity(14, 14)));
  }
  SUBCASE("single beam splitter") {
    const SynthesisResult r = synthesize(std::vector<double>{1, 3}, std::vector<double>{2, 2});
    REQUIRE(r.trace.steps.size() == 1);
    // With two modes the only donor is mode n, so the move happens in the
    // final beam splitter stage.
    CHECK(r.trace.steps[0].stage == 4);
    CHECK(r.trace.steps[0].kind == StepKind::kBeamSplitter);
    CHECK(r.trace.steps[0].params[0] == Approx(std::numbers::pi / 4));
  }
  SUBCASE("single squeezer") {
    const double c = std::cosh(1.0);
    const SynthesisResult r = synthesize(std::vector<double>{1, 1}, std::vector<double>{c, c});
    REQUIRE(r.trace.steps.size() == 1);
    CHECK(r.trace.steps[0].kind == StepKind::kSqueezer);
    CHECK(r.trace.steps[0].params[0] == Approx(0.5));
  }
  SUBCASE("unsorted inputs") {
    const std::vector<double> kappa{18, 1, 12, 3, 5, 2, 4}, m{12, 6, 11, 7, 10, 8, 9};
    const SynthesisResult r = synthesize(kappa, m);
    CHECK(r.trace.stage_counts == std::array<int, 4>{2, 1, 1, 2});
    CHECK(verify(r.s, kappa, m).ok());
  }
  SUBCASE("errors") {
    CHECK(code_of([] { synthesize(std::vector<double>{1, 1}, std::vector<double>{1, 3}); }) ==
          ErrorCode::kIncompatibleSpectra);
    CHECK(code_of([] { synthesize(std::vector<double>{0.5, 2}, std::vector<double>{1, 1.5}); }) ==
          ErrorCode::kUnphysicalGlobalSpectrum);
    CHECK(code_of([] { synthesize(std::vector<double>{1, 2}, std::vector<double>{2}); }) ==
          ErrorCode::kInvalidArgument);
    CHECK(code_of([] { jacobi_decompose(Matrix::Identity(4, 4), 1e-10, 0); }) == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("synthesize trace invariants and round trip") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const Matrix v = random_state(n, 9000 + seed, 1.0, 5.0).v;
    const SpectralVector kappa = symplectic_spectrum(v);
    const SpectralVector m = local_parameters(v);
    const SynthesisResult r = synthesize(kappa, m);
    CHECK(verify(r.s, kappa, m).ok());
    CHECK(static_cast<int>(r.trace.steps.size()) <= n - 1);

    SpectralVector prev = r.trace.initial;
    for (const SynthesisStep& step : r.trace.steps) {
      CHECK_FALSE(step.fallback);
      const SpectralVector& cur = step.diag_after;
      const double scale = 1e-10 * sum(prev);
      if (step.kind == StepKind::kBeamSplitter) CHECK(std::abs(sum(cur) - sum(prev)) < scale);
      if (step.kind == StepKind::kSqueezer) {
        CHECK(std::abs((cur[step.j] - cur[step.i]) - (prev[step.j] - prev[step.i])) < scale);
        CHECK(cur[step.i] - prev[step.i] == Approx(step.epsilon).epsilon(1e-9));
      }
      if (step.stage == 1) CHECK(step.j < n - 1);
      if (step.i == n - 1 || step.j == n - 1) CHECK(step.stage >= 2);
      CHECK(dominates(prev, cur, 1e-9 * (1 + sum(cur))).compatible);
      prev = cur;
    }
    if (!r.trace.steps.empty()) {
      SpectralVector sorted_m = m;
      std::sort(sorted_m.begin(), sorted_m.end());
      for (int j = 0; j < n; ++j) CHECK(prev[j] == Approx(sorted_m[j]).epsilon(1e-9));
    }
    const int total = std::accumulate(r.trace.stage_counts.begin(), r.trace.stage_counts.end(), 0);
    CHECK(total == static_cast<int>(r.trace.steps.size()));
    CHECK(r.trace.stage_counts[2] <= 1);
  }
}

TEST_CASE("verify") {
  const SynthesisResult r = synthesize(kWorkedKappa, kWorkedM);
  const VerifyReport good = verify(r.s, kWorkedKappa, kWorkedM);
  CHECK(good.ok());
  CHECK(good.symplectic_residual < 1e-10 * r.s.squaredNorm());

  const VerifyReport wrong = verify(Matrix::Identity(14, 14), kWorkedKappa, kWorkedM);
  CHECK_FALSE(wrong.diagonal_ok);
  CHECK(wrong.symplectic_ok);
  CHECK(wrong.spectrum_ok);

  Matrix s = Matrix::Identity(4, 4);
  s(0, 0) += 1e-3;
  const VerifyReport bumped = verify(s, std::vector<double>{1, 2}, std::vector<double>{1, 2});
  CHECK(bumped.symplectic_residual == Approx(1e-3));
  CHECK_FALSE(bumped.symplectic_ok);
}
