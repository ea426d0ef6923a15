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

#include "gqmp/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "gqmp/spectra.hpp"
#include "gqmp/two_mode.hpp"

namespace gqmp {

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kBeamSplitter: return "BS";
    case StepKind::kSqueezer: return "SQ";
    case StepKind::kGeneral: return "GEN";
  }
  return "?";
}

namespace {

double block_scalar(const Matrix& w, int j) { return std::sqrt(w.block<2, 2>(2 * j, 2 * j).determinant()); }

SpectralVector block_scalars(const Matrix& w) {
  SpectralVector out(mode_count(w));
  for (int j = 0; j < mode_count(w); ++j) out[j] = block_scalar(w, j);
  return out;
}

double product(const SpectralVector& x) { return std::accumulate(x.begin(), x.end(), 1.0, std::multiplies<>()); }

Matrix4 local_pair(const Matrix2& a, const Matrix2& b) {
  Matrix4 g = Matrix4::Zero();
  g.topLeftCorner<2, 2>() = a;
  g.bottomRightCorner<2, 2>() = b;
  return g;
}

Matrix4 inverse4(const Matrix4& s) {
  const Matrix omega = symplectic_form(2);
  return -omega * s.transpose() * omega;
}

SpectralVector sorted_copy(std::span<const double> x) {
  SpectralVector out(x.begin(), x.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> matrix_params(const Matrix4& g) {
  std::vector<double> out(16);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[4 * r + c] = g(r, c);
  return out;
}

// Working state of the synthesis: S, W = S diag(kappa) S^T and the current
// per-slot local parameters.
class Synthesizer {
 public:
  Synthesizer(const SpectralVector& kappa, const SpectralVector& m, double abs_tol)
      : n_(static_cast<int>(kappa.size())), m_(m), d_(kappa), abs_tol_(abs_tol) {
    s_ = Matrix::Identity(2 * n_, 2 * n_);
    w_ = Matrix::Zero(2 * n_, 2 * n_);
    for (int j = 0; j < n_; ++j) w_(2 * j, 2 * j) = w_(2 * j + 1, 2 * j + 1) = kappa[j];
    trace_.initial = kappa;
  }

  int n() const { return n_; }
  double d(int j) const { return d_[j]; }
  double m(int j) const { return m_[j]; }
  double eps(int j) const { return m_[j] - d_[j]; }
  double tol() const { return abs_tol_; }
  SynthesisTrace& trace() { return trace_; }

  // Applies g to the pair (i, j), which must currently be uncorrelated with
  // isotropic diagonal blocks. Otherwise the step is rebuilt from the actual
  // 4x4 block so that it still lands on (t_i, t_j).
  void step(int stage, StepKind kind, int i, int j, Matrix4 g, std::vector<double> params, double t_i, double t_j) {
    const Matrix4 block = pair_block(w_, i, j);
    const double cross = block.topRightCorner<2, 2>().cwiseAbs().maxCoeff();
    const double iso = std::max({std::abs(block(0, 0) - block(1, 1)), std::abs(block(0, 1)),
                                 std::abs(block(2, 2) - block(3, 3)), std::abs(block(2, 3))});
    bool fallback = false;
    if (cross > abs_tol_ || iso > abs_tol_) {
      fallback = true;
      const Matrix sym = 0.5 * (block + block.transpose());
      try {
        const WilliamsonFactorization wf = williamson(sym);
        g = pair_factor(wf.kappa[0], wf.kappa[1], t_i, t_j) * inverse4(wf.s);
      } catch (const Error& e) {
        throw Error(ErrorCode::kCorrelatedPair, "modes " + std::to_string(i + 1) + " and " +
                                                    std::to_string(j + 1) + " are correlated and cannot reach their targets: " +
                                                    e.what());
      }
      kind = StepKind::kGeneral;
      params = matrix_params(g);
    }
    const double before = d_[i];
    apply_pair_congruence(w_, g, i, j);
    apply_pair_left(s_, g, i, j);
    w_ = 0.5 * (w_ + w_.transpose());
    d_[i] = 0.5 * (w_(2 * i, 2 * i) + w_(2 * i + 1, 2 * i + 1));
    d_[j] = 0.5 * (w_(2 * j, 2 * j) + w_(2 * j + 1, 2 * j + 1));
    trace_.steps.push_back({stage, kind, i, j, std::move(params), d_[i] - before, fallback, d_});
    ++trace_.stage_counts[stage - 1];
  }

  SynthesisResult finish() && { return {std::move(s_), std::move(w_), std::move(trace_)}; }

 private:
  int n_;
  SpectralVector m_;
  SpectralVector d_;
  double abs_tol_;
  Matrix s_;
  Matrix w_;
  SynthesisTrace trace_;
};

}  // namespace

JacobiResult jacobi_decompose(const Matrix& v, double tol, int max_sweeps) {
  require_covariance(v);
  if (!check_physical(v)) throw Error(ErrorCode::kInvalidCovariance, "covariance is not physical");
  if (max_sweeps < 1) throw Error(ErrorCode::kInvalidArgument, "max_sweeps must be positive");
  const int n = mode_count(v);

  const LocalNormalForm lnf = local_normal_form(v);
  JacobiResult out;
  out.s = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) out.s.block<2, 2>(2 * j, 2 * j) = lnf.locals[j];
  Matrix w = lnf.v;
  out.trace.initial_diag = lnf.m;
  out.trace.initial_profit = product(lnf.m);


  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        worst = std::max(worst, w.block<2, 2>(2 * j, 2 * k).cwiseAbs().maxCoeff());
    if (worst <= tol) {
      out.trace.converged = true;
      break;
    }
    if (sweep == max_sweeps) break;
    out.trace.sweeps = sweep + 1;

    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double off = w.block<2, 2>(2 * j, 2 * k).cwiseAbs().maxCoeff();
        if (off <= tol) continue;
        const SignedSvd2 svd = signed_svd2(w.block<2, 2>(2 * j, 2 * k));
        const Matrix4 rot = local_pair(rotation2(svd.left), rotation2(svd.right));
        Matrix4 block = rot * pair_block(w, j, k) * rot.transpose();
        block = 0.5 * (block + block.transpose());
        const Matrix4 g = inverse4(williamson(block).s) * rot;
        apply_pair_congruence(w, g, j, k);
        apply_pair_left(out.s, g, j, k);
        w = 0.5 * (w + w.transpose());
        SpectralVector diag = block_scalars(w);
        const double p = product(diag);
        out.trace.steps.push_back({j, k, off, p, std::move(diag)});
      }
    }
  }
  out.kappa = block_scalars(w);
  std::sort(out.kappa.begin(), out.kappa.end());
  if (!out.trace.converged) throw JacobiNonConvergence(std::move(out));
  return out;
}

SynthesisResult synthesize(std::span<const double> kappa_in, std::span<const double> m_in, double tol) {
  const DominanceCertificate probe = dominates(kappa_in, m_in, 0.0);  // validates shape and positivity
  const SpectralVector kappa = probe.kappa_sorted;
  const SpectralVector m = probe.m_sorted;
  const int n = static_cast<int>(kappa.size());
  if (kappa.front() < 1.0 - tol) {
    throw Error(ErrorCode::kUnphysicalGlobalSpectrum, "smallest global parameter is below 1");
  }
  const double l1 = std::accumulate(m.begin(), m.end(), 0.0);
  if (!dominates(kappa, m, 1e-9 * (1.0 + l1)).compatible) {
    throw Error(ErrorCode::kIncompatibleSpectra, "global spectrum does not dominate the local spectrum");
  }
  const double scale = std::max(kappa.back(), m.back());
  Synthesizer syn(kappa, m, tol * scale);
  const double abs_tol = syn.tol();
  const int last = n - 1;
  auto& trace = syn.trace();
  trace.delta_initial = l1 - std::accumulate(kappa.begin(), kappa.end(), 0.0);

  auto require_nonnegative = [&](int i) {
    if (syn.eps(i) < -abs_tol) {
      throw Error(ErrorCode::kNumericalFailure, "mode " + std::to_string(i + 1) + " overshot its target");
    }
  };

  // Stage 1: beam splitters among the first n - 1 modes, raising mode i to
  // m_i from the least later mode that can donate.
  int i = 0;
  while (i < last) {
    require_nonnegative(i);
    const double eps = syn.eps(i);
    if (eps <= abs_tol) {
      ++i;
      continue;
    }
    int donor = -1;
    for (int j = i + 1; j < last; ++j) {
      if (syn.d(j) >= syn.m(i) - abs_tol) {
        donor = j;
        break;
      }
    }
    if (donor < 0) break;
    const double theta = bs_param(syn.d(i), syn.d(donor), syn.m(i));
    syn.step(1, StepKind::kBeamSplitter, i, donor, beam_splitter(theta), {theta}, syn.m(i), syn.d(donor) - eps);
    ++i;
  }
  trace.ell = i;

  // Stage 2: squeezers with the last mode raise both by eps_i while the
  // excess delta covers twice the gap.
  double delta = trace.delta_initial;
  if (delta > abs_tol) {
    while (i < last) {
      require_nonnegative(i);
      const double eps = syn.eps(i);
      if (eps <= abs_tol) {
        ++i;
        continue;
      }
      if (delta < 2.0 * eps - abs_tol) break;
      const double mu = sq_param(syn.d(i), syn.d(last), std::max(eps, 0.0));
      syn.step(2, StepKind::kSqueezer, i, last, squeezer(mu), {mu}, syn.m(i), syn.d(last) + eps);
      delta -= 2.0 * eps;
      ++trace.r;
      ++i;
    }
  }

  // Stage 3: one general pair transformation absorbs what is left of delta.
  if (delta > abs_tol && i < last) {
    require_nonnegative(i);
    const double eps = syn.eps(i);
    const double t_last = syn.d(last) + delta - eps;
    Matrix4 g;
    try {
      g = pair_factor(syn.d(i), syn.d(last), syn.m(i), t_last);
    } catch (const Error& e) {
      throw Error(ErrorCode::kNumericalFailure, std::string("general pair step infeasible: ") + e.what());
    }
    syn.step(3, StepKind::kGeneral, i, last, g, matrix_params(g), syn.m(i), t_last);
    delta = 0.0;
    ++i;
  }

  // Stage 4: beam splitters with the last mode hand its surplus to the
  // remaining modes.
  while (i < last) {
    require_nonnegative(i);
    const double eps = syn.eps(i);
    if (eps > abs_tol) {
      const double theta = bs_param(syn.d(i), syn.d(last), syn.m(i));
      syn.step(4, StepKind::kBeamSplitter, i, last, beam_splitter(theta), {theta}, syn.m(i), syn.d(last) - eps);
    }
    ++i;
  }
  if (std::abs(syn.eps(last)) > abs_tol) {
    throw Error(ErrorCode::kNumericalFailure, "last mode missed its target by " + std::to_string(syn.eps(last)));
  }
  return std::move(syn).finish();
}

VerifyReport verify(const Matrix& s, std::span<const double> kappa_in, std::span<const double> m_in, double tol) {
  const SpectralVector kappa = sorted_copy(kappa_in);
  const SpectralVector m = sorted_copy(m_in);
  const int n = static_cast<int>(kappa.size());
  if (s.rows() != 2 * n || s.cols() != 2 * n || static_cast<int>(m.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument, "verify: dimensions disagree");
  }
  VerifyReport rep;
  rep.symplectic_residual = symplectic_residual(s);

  Vector d(2 * n);
  for (int j = 0; j < n; ++j) d(2 * j) = d(2 * j + 1) = kappa[j];
  Matrix v = s * d.asDiagonal() * s.transpose();
  v = 0.5 * (v + v.transpose());

  SpectralVector local(n);
  for (int j = 0; j < n; ++j) {
    const Matrix2 b = v.block<2, 2>(2 * j, 2 * j);
    const double mean = 0.5 * b.trace();
    local[j] = b.determinant() > 0.0 ? std::sqrt(b.determinant()) : 0.0;
    rep.isotropy_residual = std::max({rep.isotropy_residual, std::abs(b(0, 0) - mean), std::abs(b(0, 1))});
  }
  std::sort(local.begin(), local.end());
  for (int j = 0; j < n; ++j) rep.diagonal_residual = std::max(rep.diagonal_residual, std::abs(local[j] - m[j]));

  try {
    const SpectralVector spec = symplectic_spectrum(v);
    for (int j = 0; j < n; ++j) rep.spectrum_residual = std::max(rep.spectrum_residual, std::abs(spec[j] - kappa[j]));
  } catch (const Error&) {
    rep.spectrum_residual = std::numeric_limits<double>::infinity();
  }
  rep.symplectic_ok = rep.symplectic_residual <= tol;
  rep.diagonal_ok = rep.diagonal_residual <= tol && rep.isotropy_residual <= tol;
  rep.spectrum_ok = rep.spectrum_residual <= tol;
  return rep;
}

}  // namespace gqmp
