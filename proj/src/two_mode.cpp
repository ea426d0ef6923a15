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

#include "gqmp/two_mode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "gqmp/error.hpp"
#include "gqmp/spectra.hpp"

namespace gqmp {

namespace {

// Relative tolerance for redistribution feasibility.
constexpr double kFeasibilityTol = 1e-10;
// Relative slack on the coupling existence condition.
constexpr double kCouplingTol = 1e-9;
// Targets this close to a two-mode boundary are realized by one generator.
constexpr double kBoundaryTol = 1e-12;

void require_positive(std::initializer_list<double> values, const char* what) {
  for (double x : values) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be finite and positive");
    }
  }
}

// Exact mode exchange [[0, I], [-I, 0]], a beam splitter at theta = pi/2.
Matrix4 mode_swap() {
  Matrix4 g = Matrix4::Zero();
  g.topRightCorner<2, 2>() = Matrix2::Identity();
  g.bottomLeftCorner<2, 2>() = -Matrix2::Identity();
  return g;
}

Matrix4 sector_matrix(const Matrix2& a) {
  const Matrix2 a_inv_t = a.inverse().transpose();
  Matrix4 s = Matrix4::Zero();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      s(2 * r, 2 * c) = a(r, c);
      s(2 * r + 1, 2 * c + 1) = a_inv_t(r, c);
    }
  }
  return s;
}

// Residual of the diagonal targets for S = A (+) A^{-T} acting on diag(src):
// diag(A D A^T) - t and diag(A^{-T} D A^{-1}) - t.
Eigen::Vector4d sector_residual(const Matrix2& a, const Eigen::Vector2d& src, const Eigen::Vector2d& t) {
  const Matrix2 b = a.inverse();
  Eigen::Vector4d f;
  for (int i = 0; i < 2; ++i) {
    f(i) = a(i, 0) * a(i, 0) * src(0) + a(i, 1) * a(i, 1) * src(1) - t(i);
    f(2 + i) = b(0, i) * b(0, i) * src(0) + b(1, i) * b(1, i) * src(1) - t(i);
  }
  return f;
}

// Newton polish of the position block so that the diagonal targets hold to
// round-off. The standard form itself is ill-conditioned when a source value
// is much smaller than the targets (its position determinant then comes from
// cancellation), and that error is otherwise amplified into the diagonal.
Matrix2 polish_sector(Matrix2 a, const Eigen::Vector2d& src, const Eigen::Vector2d& t) {
  Eigen::Vector4d f = sector_residual(a, src, t);
  for (int iter = 0; iter < 8 && f.cwiseAbs().maxCoeff() > 0.0; ++iter) {
    const Matrix2 b = a.inverse();
    Matrix4 jac = Matrix4::Zero();
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) jac(i, 2 * i + k) = 2.0 * a(i, k) * src(k);
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          double d = 0.0;
          for (int k = 0; k < 2; ++k) d -= 2.0 * src(k) * b(k, i) * b(k, p) * b(q, i);
          jac(2 + i, 2 * p + q) = d;
        }
      }
    }
    const Eigen::Vector4d step = jac.completeOrthogonalDecomposition().solve(-f);
    Matrix2 next = a;
    next(0, 0) += step(0);
    next(0, 1) += step(1);
    next(1, 0) += step(2);
    next(1, 1) += step(3);
    const Eigen::Vector4d fn = sector_residual(next, src, t);
    if (!(fn.cwiseAbs().maxCoeff() < f.cwiseAbs().maxCoeff())) break;
    a = next;
    f = fn;
  }
  return a;
}

}  // namespace

Matrix4 TwoModeStandardForm::matrix() const {
  Matrix4 v = Matrix4::Zero();
  v(0, 0) = v(1, 1) = m1;
  v(2, 2) = v(3, 3) = m2;
  v(0, 2) = v(2, 0) = kx;
  v(1, 3) = v(3, 1) = kp;
  return v;
}

Matrix2 rotation2(double phi) {
  Matrix2 r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

SignedSvd2 signed_svd2(const Matrix2& c) {
  const double e = 0.5 * (c(0, 0) + c(1, 1));
  const double f = 0.5 * (c(0, 0) - c(1, 1));
  const double g = 0.5 * (c(1, 0) + c(0, 1));
  const double h = 0.5 * (c(1, 0) - c(0, 1));
  const double q = std::hypot(e, h);
  const double r = std::hypot(f, g);
  const double a1 = std::atan2(g, f);
  const double a2 = std::atan2(h, e);
  // c = rot((a2 + a1) / 2) diag(q + r, q - r) rot((a2 - a1) / 2)
  return {q + r, q - r, -0.5 * (a2 + a1), 0.5 * (a2 - a1)};
}

TwoModeInvariants two_mode_invariants(const Matrix& v4) {
  if (v4.rows() != 4 || v4.cols() != 4) {
    throw Error(ErrorCode::kInvalidArgument, "two-mode invariants need a 4x4 matrix");
  }
  const Matrix omega = symplectic_form(2);
  return {0.5 * (omega * v4 * omega.transpose() * v4).trace(), v4.determinant()};
}

StandardFormResult standard_form(const Matrix& v4) {
  if (v4.rows() != 4 || v4.cols() != 4) {
    throw Error(ErrorCode::kInvalidArgument, "standard form needs a 4x4 matrix");
  }
  require_covariance(v4);
  const LocalNormalForm lnf = local_normal_form(v4);
  const SignedSvd2 svd = signed_svd2(lnf.v.block<2, 2>(0, 2));

  StandardFormResult out;
  out.locals = {rotation2(svd.left) * lnf.locals[0], rotation2(svd.right) * lnf.locals[1]};
  out.form = {lnf.m[0], lnf.m[1], svd.s1, svd.s2};
  if (out.form.m1 > out.form.m2) {
    std::swap(out.form.m1, out.form.m2);
    out.swapped = true;
  }
  return out;
}

PairWilliamson standard_form_williamson(const TwoModeStandardForm& form) {
  Matrix2 x;
  x << form.m1, form.kx, form.kx, form.m2;
  Matrix2 p;
  p << form.m1, form.kp, form.kp, form.m2;
  const Eigen::LLT<Matrix2> llt(x);
  if (llt.info() != Eigen::Success || p.determinant() <= 0.0 || form.m1 <= 0.0) {
    throw Error(ErrorCode::kInvalidCovariance, "standard form is not positive definite");
  }
  const Matrix2 l = llt.matrixL();
  // With X = L L^T and L^T P L = O diag(k^2) O^T, A = L O diag(k)^{-1/2} gives
  // A diag(k) A^T = X and A^T P A = diag(k).
  Eigen::SelfAdjointEigenSolver<Matrix2> es(l.transpose() * p * l);
  if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0) {
    throw Error(ErrorCode::kInvalidCovariance, "standard form is not positive definite");
  }
  const Eigen::Vector2d kappa = es.eigenvalues().cwiseSqrt();
  const Eigen::Vector2d root = kappa.cwiseSqrt();
  const Matrix2 a = l * es.eigenvectors() * root.cwiseInverse().asDiagonal();
  return {sector_matrix(a), {kappa(0), kappa(1)}};
}

Couplings solve_couplings(double m1, double m2, double k1, double k2) {
  require_positive({m1, m2, k1, k2}, "spectral parameters");
  if (m1 > m2 || k1 > k2) throw Error(ErrorCode::kInvalidArgument, "spectral pairs must be sorted");

  const double prod_m = m1 * m2;
  const double prod_k = k1 * k2;
  const double p = 0.5 * ((k1 * k1 + k2 * k2) - (m1 * m1 + m2 * m2));
  // m1 m2 - p - k1 k2 and m1 m2 + p - k1 k2 in factored form, so that each is
  // exactly zero on its boundary instead of a cancellation of squares.
  double sum_gap = 0.5 * ((m1 + m2) - (k1 + k2)) * ((m1 + m2) + (k1 + k2));
  double diff_gap = 0.5 * ((k2 - k1) - (m2 - m1)) * ((k2 - k1) + (m2 - m1));
  if (std::min(sum_gap, diff_gap) < -kCouplingTol * prod_m) {
    throw Error(ErrorCode::kIncompatibleSpectra, "no real couplings: local and global spectra violate the two-mode conditions");
  }
  sum_gap = std::max(0.0, sum_gap);
  diff_gap = std::max(0.0, diff_gap);
  // (kx - kp)^2 = q - 2p and (kx + kp)^2 = q + 2p, with q = kx^2 + kp^2.
  const double minus = std::sqrt(sum_gap * (prod_m - p + prod_k) / prod_m);
  const double plus = std::sqrt(diff_gap * (prod_m + p + prod_k) / prod_m);
  return {0.5 * (plus + minus), 0.5 * (plus - minus)};
}

Matrix4 reconstruct_two_mode(double m1, double m2, double k1, double k2) {
  const Couplings c = solve_couplings(m1, m2, k1, k2);
  return TwoModeStandardForm{m1, m2, c.kx, c.kp}.matrix();
}

double bs_param(double a, double b, double target) {
  require_positive({a, b, target}, "redistribution values");
  const double slack = kFeasibilityTol * std::max({1.0, a, b});
  if (target < std::min(a, b) - slack || target > std::max(a, b) + slack) {
    throw Error(ErrorCode::kInfeasibleRedistribution, "beam splitter target lies outside the source pair");
  }
  if (std::abs(b - a) <= slack) return 0.0;
  const double s2 = std::clamp((target - a) / (b - a), 0.0, 1.0);
  return std::asin(std::sqrt(s2));
}

double sq_param(double a, double b, double eps) {
  require_positive({a, b}, "redistribution values");
  if (eps < 0.0) throw Error(ErrorCode::kInfeasibleRedistribution, "squeezing cannot lower the pair");
  return std::asinh(std::sqrt(eps / (a + b)));
}

BalancedDiagonalizer diagonalize_balanced(const TwoModeStandardForm& form, double tol) {
  const double scale = std::max({1.0, form.m1, form.m2});
  if (std::abs(std::abs(form.kx) - std::abs(form.kp)) > tol * scale) {
    throw Error(ErrorCode::kNotBalanced, "couplings differ in magnitude");
  }
  if (std::abs(form.kx) <= tol * scale && std::abs(form.kp) <= tol * scale) {
    return {GeneratorKind::kBeamSplitter, 0.0};
  }
  if (form.kx * form.kp > 0.0) {
    // Off-diagonal block after congruence: (1/2) sin 2t (m2 - m1) + k cos 2t.
    const double k = 0.5 * (form.kx + form.kp);
    const double diff = form.m1 - form.m2;
    const double theta = std::abs(diff) <= tol * scale ? std::copysign(std::numbers::pi / 4.0, k)
                                                       : 0.5 * std::atan(2.0 * k / diff);
    return {GeneratorKind::kBeamSplitter, theta};
  }
  // Off-diagonal block after congruence: Z [(1/2) sinh 2u (m1 + m2) + k cosh 2u].
  const double k = 0.5 * (form.kx - form.kp);
  const double ratio = 2.0 * k / (form.m1 + form.m2);
  if (std::abs(ratio) >= 1.0) {
    throw Error(ErrorCode::kInvalidCovariance, "coupling too large for a positive definite state");
  }
  return {GeneratorKind::kSqueezer, -0.5 * std::atanh(ratio)};
}

Matrix4 pair_factor(double a, double b, double t_a, double t_b) {
  require_positive({a, b, t_a, t_b}, "pair values");
  const auto [a1, a2] = std::minmax(a, b);
  const auto [t1, t2] = std::minmax(t_a, t_b);
  const double slack = kFeasibilityTol * std::max({1.0, a2, t2});
  if (t1 + t2 < a1 + a2 - slack || t2 - t1 > a2 - a1 + slack) {
    throw Error(ErrorCode::kInfeasibleRedistribution, "targets violate the two-mode compatibility conditions");
  }
  // On either boundary a single generator does the job exactly.
  const double edge = kBoundaryTol * (a2 + t2);
  if (std::abs((t1 + t2) - (a1 + a2)) <= edge) {
    return beam_splitter(bs_param(a, b, std::clamp(t_a, a1, a2)));
  }
  if (std::abs((t2 - t1) - (a2 - a1)) <= edge) {
    Matrix4 s = squeezer(sq_param(a, b, 0.5 * ((t1 - a1) + (t2 - a2))));
    if ((a > b) != (t_a > t_b)) s = mode_swap() * s;
    return s;
  }
  Couplings c{};
  try {
    c = solve_couplings(t1, t2, a1, a2);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInfeasibleRedistribution, e.what());
  }
  const Matrix4 sector = standard_form_williamson({t1, t2, c.kx, c.kp}).s;
  Matrix2 position;
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col) position(r, col) = sector(2 * r, 2 * col);
  Matrix4 s = sector_matrix(polish_sector(position, {a1, a2}, {t1, t2}));
  if (a > b) s = s * mode_swap();
  if (t_a > t_b) s = mode_swap() * s;
  return s;
}

}  // namespace gqmp
