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

#include "gqmp/symplectic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gqmp/error.hpp"
#include "gqmp/spectra.hpp"

namespace gqmp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidCovariance: return "invalid-covariance";
    case ErrorCode::kNumericalFailure: return "numerical-failure";
    case ErrorCode::kIncompatibleSpectra: return "incompatible-spectra";
    case ErrorCode::kInfeasibleRedistribution: return "infeasible-redistribution";
    case ErrorCode::kNotBalanced: return "not-balanced";
    case ErrorCode::kNonConvergence: return "non-convergence";
    case ErrorCode::kCorrelatedPair: return "correlated-pair-encountered";
    case ErrorCode::kUnphysicalGlobalSpectrum: return "unphysical-global-spectrum";
  }
  return "unknown";
}

namespace {

// Squeezing parameters drawn by random_state lie in [0, 0.5 sqrt(2 / n)].
// The product of 4n^2 generators amplifies squeezing exponentially in n; the
// sqrt(2 / n) factor keeps |V| of order 10 for every mode count.
constexpr double kRandomSqueezeMax = 0.5;

void require_pair(int j, int k, int n) {
  if (n < 2 || j < 0 || k < 0 || j >= n || k >= n || j == k) {
    throw Error(ErrorCode::kInvalidArgument,
                "mode pair (" + std::to_string(j) + ", " + std::to_string(k) +
                    ") invalid for " + std::to_string(n) + " modes");
  }
}

std::array<int, 4> pair_rows(int j, int k) {
  return {2 * j, 2 * j + 1, 2 * k, 2 * k + 1};
}

Matrix2 rotation(double phi) {
  Matrix2 r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

}  // namespace

Matrix symplectic_form(int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "mode count must be positive");
  Matrix omega = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    omega(2 * j, 2 * j + 1) = 1.0;
    omega(2 * j + 1, 2 * j) = -1.0;
  }
  return omega;
}

double symplectic_residual(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "symplectic test needs a square even-dimensional matrix");
  }
  const Matrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

bool is_symplectic(const Matrix& s, double tol) { return symplectic_residual(s) <= tol; }

Matrix symplectic_inverse(const Matrix& s) {
  const Matrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return -omega * s.transpose() * omega;
}

Matrix4 beam_splitter(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix4 g = Matrix4::Zero();
  g.topLeftCorner<2, 2>() = c * Matrix2::Identity();
  g.topRightCorner<2, 2>() = s * Matrix2::Identity();
  g.bottomLeftCorner<2, 2>() = -s * Matrix2::Identity();
  g.bottomRightCorner<2, 2>() = c * Matrix2::Identity();
  return g;
}

Matrix4 squeezer(double mu) {
  const double ch = std::cosh(mu);
  const double sh = std::sinh(mu);
  const Matrix2 z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  Matrix4 g = Matrix4::Zero();
  g.topLeftCorner<2, 2>() = ch * Matrix2::Identity();
  g.topRightCorner<2, 2>() = sh * z;
  g.bottomLeftCorner<2, 2>() = sh * z;
  g.bottomRightCorner<2, 2>() = ch * Matrix2::Identity();
  return g;
}

Matrix embed_pair(const Matrix4& g, int j, int k, int n) {
  require_pair(j, k, n);
  Matrix s = Matrix::Identity(2 * n, 2 * n);
  const auto idx = pair_rows(j, k);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) s(idx[a], idx[b]) = g(a, b);
  }
  return s;
}

Matrix beam_splitter_pair(double theta, int j, int k, int n) {
  return embed_pair(beam_splitter(theta), j, k, n);
}

Matrix squeezer_pair(double mu, int j, int k, int n) {
  if (mu < 0.0) throw Error(ErrorCode::kInvalidArgument, "squeezing parameter must be nonnegative");
  return embed_pair(squeezer(mu), j, k, n);
}

void apply_pair_left(Matrix& s, const Matrix4& g, int j, int k) {
  require_pair(j, k, static_cast<int>(s.rows() / 2));
  const auto idx = pair_rows(j, k);
  const Matrix rows = s(idx, Eigen::all);
  s(idx, Eigen::all) = g * rows;
}

void apply_pair_congruence(Matrix& v, const Matrix4& g, int j, int k) {
  apply_pair_left(v, g, j, k);
  const auto idx = pair_rows(j, k);
  const Matrix cols = v(Eigen::all, idx);
  v(Eigen::all, idx) = cols * g.transpose();
}

Matrix4 pair_block(const Matrix& v, int j, int k) {
  require_pair(j, k, static_cast<int>(v.rows() / 2));
  return v(pair_rows(j, k), pair_rows(j, k));
}

int mode_count(const Matrix& v) { return static_cast<int>(v.rows() / 2); }

void require_covariance(const Matrix& v, double tol) {
  if (v.rows() == 0 || v.rows() != v.cols() || v.rows() % 2 != 0) {
    throw Error(ErrorCode::kInvalidCovariance, "covariance must be a nonempty square even-dimensional matrix");
  }
  if (!v.allFinite()) throw Error(ErrorCode::kInvalidCovariance, "covariance has non-finite entries");
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw Error(ErrorCode::kInvalidCovariance, "covariance is not symmetric");
  }
  Eigen::LLT<Matrix> llt(0.5 * (v + v.transpose()));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidCovariance, "covariance is not positive definite");
  }
}

SpectralVector local_parameters(const Matrix& v) {
  const int n = mode_count(v);
  SpectralVector m(n);
  for (int j = 0; j < n; ++j) {
    const double det = v.block<2, 2>(2 * j, 2 * j).determinant();
    if (!(det > 0.0)) throw Error(ErrorCode::kInvalidCovariance, "diagonal block is not positive definite");
    m[j] = std::sqrt(det);
  }
  return m;
}

LocalNormalForm local_normal_form(const Matrix& v) {
  if (v.rows() == 0 || v.rows() != v.cols() || v.rows() % 2 != 0) {
    throw Error(ErrorCode::kInvalidCovariance, "covariance must be a nonempty square even-dimensional matrix");
  }
  const int n = mode_count(v);
  LocalNormalForm out{v, {}, {}};
  out.locals.reserve(n);
  out.m.reserve(n);
  Matrix l = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const Matrix2 b = 0.5 * (v.block<2, 2>(2 * j, 2 * j) + v.block<2, 2>(2 * j, 2 * j).transpose());
    Eigen::SelfAdjointEigenSolver<Matrix2> es(b);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      throw Error(ErrorCode::kInvalidCovariance, "diagonal block " + std::to_string(j + 1) + " is not positive definite");
    }
    const double m = std::sqrt(es.eigenvalues().prod());
    const Matrix2 inv_sqrt =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    const Matrix2 local = std::sqrt(m) * inv_sqrt;
    l.block<2, 2>(2 * j, 2 * j) = local;
    out.locals.push_back(local);
    out.m.push_back(m);
  }
  out.v = l * v * l.transpose();
  // Diagonal blocks are m_j I up to round-off; pin them exactly.
  for (int j = 0; j < n; ++j) out.v.block<2, 2>(2 * j, 2 * j) = out.m[j] * Matrix2::Identity();
  return out;
}

bool check_physical(const Matrix& v, double tol) {
  try {
    const SpectralVector kappa = symplectic_spectrum(v);
    return kappa.front() >= 1.0 - tol;
  } catch (const Error&) {
    return false;
  }
}

RandomState random_state(int n, std::uint64_t seed, double kappa_min, double kappa_max) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "mode count must be positive");
  if (kappa_min < 1.0 || kappa_max < kappa_min) {
    throw Error(ErrorCode::kInvalidArgument, "kappa range must satisfy 1 <= min <= max");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> kappa_dist(kappa_min, kappa_max);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> squeeze(0.0, kRandomSqueezeMax * std::sqrt(2.0 / std::max(n, 2)));
  std::uniform_int_distribution<int> mode(0, n - 1);
  std::uniform_int_distribution<int> kind(0, n > 1 ? 2 : 0);

  RandomState out;
  out.kappa.resize(n);
  for (auto& k : out.kappa) k = kappa_dist(rng);

  out.s = Matrix::Identity(2 * n, 2 * n);
  const int count = 4 * n * n;
  for (int step = 0; step < count; ++step) {
    const int which = kind(rng);
    const int j = mode(rng);
    if (which == 0) {
      const double r = squeeze(rng);
      const Matrix2 local =
          rotation(angle(rng)) * Eigen::Vector2d(std::exp(r), std::exp(-r)).asDiagonal() * rotation(angle(rng));
      const Matrix rows = out.s.middleRows(2 * j, 2);
      out.s.middleRows(2 * j, 2) = local * rows;
      continue;
    }
    int k = mode(rng);
    while (k == j) k = mode(rng);
    const Matrix4 g = which == 1 ? beam_splitter(angle(rng)) : squeezer(squeeze(rng));
    apply_pair_left(out.s, g, j, k);
  }
  Vector d(2 * n);
  for (int j = 0; j < n; ++j) d(2 * j) = d(2 * j + 1) = out.kappa[j];
  out.v = out.s * d.asDiagonal() * out.s.transpose();
  out.v = 0.5 * (out.v + out.v.transpose());
  return out;
}

}  // namespace gqmp
