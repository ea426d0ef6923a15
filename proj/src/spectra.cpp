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

#include "gqmp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include "gqmp/error.hpp"

namespace gqmp {

namespace {

Matrix symmetric_sqrt(const Matrix& v) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (v + v.transpose()));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::kInvalidCovariance, "covariance is not positive definite");
  }
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// Hermitian i V^{1/2} Omega V^{1/2}; its eigenvalues are +-kappa_j.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> canonical_solver(const Matrix& sqrt_v, bool vectors) {
  const int n = mode_count(sqrt_v);
  const Matrix a = sqrt_v * symplectic_form(n) * sqrt_v;
  const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "eigensolver failed on the symplectic spectrum problem");
  }
  return es;
}

void require_spectral(std::span<const double> values, const char* name) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " is empty");
  for (double x : values) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " entries must be finite and positive");
    }
  }
}

}  // namespace

SpectralVector symplectic_spectrum(const Matrix& v) {
  require_covariance(v);
  const int n = mode_count(v);
  const auto es = canonical_solver(symmetric_sqrt(v), false);
  SpectralVector kappa(n);
  for (int j = 0; j < n; ++j) kappa[j] = es.eigenvalues()(n + j);
  return kappa;
}

WilliamsonFactorization williamson(const Matrix& v) {
  require_covariance(v);
  const int n = mode_count(v);
  const Matrix sqrt_v = symmetric_sqrt(v);
  const auto es = canonical_solver(sqrt_v, true);

  // For H u = kappa u with u = x + i y: A x = kappa y and A y = -kappa x,
  // so the column pair (y, x) spans a block kappa [[0,1],[-1,0]].
  Matrix o(2 * n, 2 * n);
  WilliamsonFactorization out;
  out.kappa.resize(n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXcd u = es.eigenvectors().col(n + j);
    o.col(2 * j) = std::sqrt(2.0) * u.imag();
    o.col(2 * j + 1) = std::sqrt(2.0) * u.real();
    out.kappa[j] = es.eigenvalues()(n + j);
  }
  Vector d(2 * n);
  for (int j = 0; j < n; ++j) d(2 * j) = d(2 * j + 1) = 1.0 / std::sqrt(out.kappa[j]);
  out.s = sqrt_v * o * d.asDiagonal();

  const Matrix omega = symplectic_form(n);
  const Matrix form = out.s.transpose() * omega * out.s;
  for (int j = 0; j < n; ++j) {
    if (form(2 * j, 2 * j + 1) < 0.0) out.s.col(2 * j).swap(out.s.col(2 * j + 1));
  }
  const double scale = std::max(1.0, out.s.cwiseAbs().maxCoeff());
  if (symplectic_residual(out.s) > 1e-8 * scale * scale) {
    throw Error(ErrorCode::kNumericalFailure, "Williamson factor failed the symplectic check");
  }
  return out;
}

DominanceCertificate dominates(std::span<const double> kappa, std::span<const double> m, double tol) {
  require_spectral(kappa, "global spectrum");
  require_spectral(m, "local spectrum");
  if (kappa.size() != m.size()) {
    throw Error(ErrorCode::kInvalidArgument, "global and local spectra differ in length");
  }
  DominanceCertificate cert;
  cert.kappa_sorted.assign(kappa.begin(), kappa.end());
  cert.m_sorted.assign(m.begin(), m.end());
  std::sort(cert.kappa_sorted.begin(), cert.kappa_sorted.end());
  std::sort(cert.m_sorted.begin(), cert.m_sorted.end());

  const std::size_t n = kappa.size();
  cert.partial_sum_slacks.resize(n);
  double sum_m = 0.0;
  double sum_k = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum_m += cert.m_sorted[k];
    sum_k += cert.kappa_sorted[k];
    cert.partial_sum_slacks[k] = sum_m - sum_k;
  }
  const double head_k = sum_k - cert.kappa_sorted.back();
  const double head_m = sum_m - cert.m_sorted.back();
  cert.tail_slack = (cert.kappa_sorted.back() - head_k) - (cert.m_sorted.back() - head_m);

  cert.compatible = cert.tail_slack >= -tol &&
                    std::all_of(cert.partial_sum_slacks.begin(), cert.partial_sum_slacks.end(),
                                [tol](double s) { return s >= -tol; });
  return cert;
}

double thermal_ratio(double param) {
  if (!(param >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "thermal parameter must be >= 1");
  return (param - 1.0) / (param + 1.0);
}

std::vector<ThermalEigenvalue> thermal_eigenvalues(std::span<const double> params, int count) {
  if (params.empty()) throw Error(ErrorCode::kInvalidArgument, "no thermal parameters given");
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "count must be positive");
  std::vector<double> xi;
  xi.reserve(params.size());
  for (double p : params) xi.push_back(thermal_ratio(p));

  auto value_of = [&xi](const std::vector<int>& occ) {
    double v = 1.0;
    for (std::size_t j = 0; j < xi.size(); ++j) v *= (1.0 - xi[j]) * std::pow(xi[j], occ[j]);
    return v;
  };
  // Max-heap on value; equal values pop in lexicographic order.
  auto later = [](const ThermalEigenvalue& a, const ThermalEigenvalue& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.occupation > b.occupation;
  };
  std::priority_queue<ThermalEigenvalue, std::vector<ThermalEigenvalue>, decltype(later)> frontier(later);
  std::set<std::vector<int>> seen;

  std::vector<int> origin(params.size(), 0);
  frontier.push({value_of(origin), origin});
  seen.insert(origin);

  std::vector<ThermalEigenvalue> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    ThermalEigenvalue top = frontier.top();
    frontier.pop();
    for (std::size_t j = 0; j < xi.size(); ++j) {
      std::vector<int> next = top.occupation;
      ++next[j];
      if (seen.insert(next).second) frontier.push({value_of(next), next});
    }
    out.push_back(std::move(top));
  }
  return out;
}

}  // namespace gqmp
