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

#include "gqmp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

#include "gqmp/error.hpp"
#include "gqmp/marginal.hpp"
#include "gqmp/spectra.hpp"
#include "gqmp/two_mode.hpp"

namespace gqmp::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

// Tolerance on the physicality threshold kappa_1 >= 1.
constexpr double kPhysicalTol = 1e-10;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void dump_to(std::ostream& os, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      os << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ',';
        first = false;
        os << Json(key).dump() << ':';
        dump_to(os, value);
      }
      os << '}';
      break;
    }
    case Json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        dump_to(os, j[i]);
      }
      os << ']';
      break;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        break;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << buf;
      break;
    }
    default:
      os << j.dump();
  }
}

double scaled_dominance_tol(const SpectralVector& m) {
  return 1e-9 * (1.0 + std::accumulate(m.begin(), m.end(), 0.0));
}

Json certificate_json(const DominanceCertificate& cert) {
  Json j;
  j["kappa_sorted"] = cert.kappa_sorted;
  j["m_sorted"] = cert.m_sorted;
  j["partial_sum_slacks"] = cert.partial_sum_slacks;
  j["tail_slack"] = cert.tail_slack;
  j["compatible"] = cert.compatible;
  return j;
}

SpectralVector read_vector(const std::string& path) { return parse_vector_file(read_json(path)); }

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidCovariance:
      return kExitInput;
    case ErrorCode::kIncompatibleSpectra:
    case ErrorCode::kUnphysicalGlobalSpectrum:
    case ErrorCode::kInfeasibleRedistribution:
      return kExitRejected;
    default:
      return kExitNumerical;
  }
}

// Runs `body`, mapping exceptions to exit codes and messages on `err`.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e);
  }
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot open " + path + " for writing");
  os << dump(j) << '\n';
}

}  // namespace

std::string dump(const Json& j) {
  std::ostringstream os;
  dump_to(os, j);
  return os.str();
}

Json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path);
  return Json::parse(is);
}

SpectralVector parse_vector_file(const Json& j) {
  const Json& values = j.is_object() ? j.at("values") : j;
  if (!values.is_array() || values.empty()) throw InputError("vector file needs a nonempty \"values\" array");
  SpectralVector out;
  for (const auto& x : values) {
    if (!x.is_number()) throw InputError("vector entries must be numbers");
    const double v = x.get<double>();
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("vector entries must be finite and positive");
    out.push_back(v);
  }
  return out;
}

Matrix parse_matrix_file(const Json& j) {
  if (!j.is_object()) throw InputError("matrix file must be an object with \"n\" and \"data\"");
  const Json& nj = j.at("n");
  if (!nj.is_number_integer() || nj.get<long long>() < 1) throw InputError("\"n\" must be a positive integer");
  const int n = nj.get<int>();
  const Json& data = j.at("data");
  const std::size_t dim = 2 * static_cast<std::size_t>(n);
  if (!data.is_array() || data.size() != dim * dim) {
    throw InputError("\"data\" must hold 4n^2 = " + std::to_string(dim * dim) + " numbers");
  }
  Matrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      const Json& x = data[r * dim + c];
      if (!x.is_number()) throw InputError("matrix entries must be numbers");
      m(r, c) = x.get<double>();
    }
  }
  return m;
}

Json matrix_file(const Matrix& m) {
  Json j;
  j["n"] = m.rows() / 2;
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  j["data"] = std::move(data);
  return j;
}

int run_check(const std::string& global_path, const std::string& local_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SpectralVector kappa = read_vector(global_path);
    const SpectralVector m = read_vector(local_path);
    if (kappa.size() != m.size()) throw InputError("global and local spectra differ in length");
    const DominanceCertificate cert = dominates(kappa, m, scaled_dominance_tol(m));
    const bool physical = cert.kappa_sorted.front() >= 1.0 - kPhysicalTol;
    Json j = certificate_json(cert);
    j["physical"] = physical;
    out << dump(j) << '\n';
    return cert.compatible && physical ? kExitOk : kExitRejected;
  });
}

int run_synthesize(const std::string& global_path, const std::string& local_path, const std::string& out_path,
                   const std::optional<std::string>& trace_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SpectralVector kappa = read_vector(global_path);
    const SpectralVector m = read_vector(local_path);
    if (kappa.size() != m.size()) throw InputError("global and local spectra differ in length");

    const SynthesisResult res = synthesize(kappa, m);
    const VerifyReport rep = verify(res.s, kappa, m);

    Json file;
    file["V"] = matrix_file(res.v);
    file["S"] = matrix_file(res.s);
    write_file(out_path, file);

    if (trace_path) {
      Json steps = Json::array();
      for (const SynthesisStep& st : res.trace.steps) {
        Json s;
        s["stage"] = st.stage;
        s["kind"] = to_string(st.kind);
        s["pair"] = {st.i + 1, st.j + 1};
        s["param"] = st.params.size() == 1 ? Json(st.params.front()) : Json(st.params);
        s["epsilon"] = st.epsilon;
        s["fallback"] = st.fallback;
        s["diag_after"] = st.diag_after;
        steps.push_back(std::move(s));
      }
      Json t;
      t["initial"] = res.trace.initial;
      t["steps"] = std::move(steps);
      t["stage_counts"] = res.trace.stage_counts;
      t["ell"] = res.trace.ell;
      t["r"] = res.trace.r;
      t["delta_initial"] = res.trace.delta_initial;
      write_file(*trace_path, t);
    }

    Json summary;
    summary["stage_counts"] = res.trace.stage_counts;
    summary["steps"] = res.trace.steps.size();
    Json vj;
    vj["symplectic_residual"] = rep.symplectic_residual;
    vj["diagonal_residual"] = rep.diagonal_residual;
    vj["isotropy_residual"] = rep.isotropy_residual;
    vj["spectrum_residual"] = rep.spectrum_residual;
    vj["ok"] = rep.ok();
    summary["verify"] = std::move(vj);
    out << dump(summary) << '\n';
    if (!rep.ok()) {
      err << "error: synthesized transformation failed verification\n";
      return kExitRejected;
    }
    return kExitOk;
  });
}

int run_decompose(const std::string& matrix_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Matrix v = parse_matrix_file(read_json(matrix_path));
    const SpectralVector kappa = symplectic_spectrum(v);
    SpectralVector m = local_parameters(v);
    std::sort(m.begin(), m.end());
    const DominanceCertificate cert = dominates(kappa, m, scaled_dominance_tol(m));
    Json j;
    j["kappa"] = kappa;
    j["m"] = m;
    j["physical"] = kappa.front() >= 1.0 - kPhysicalTol;
    j["certificate"] = certificate_json(cert);
    out << dump(j) << '\n';
    if (!cert.compatible) {
      err << "error: spectra of a valid covariance must be compatible; the input is likely corrupt\n";
      return kExitRejected;
    }
    return kExitOk;
  });
}

int run_williamson(const std::string& matrix_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Matrix v = parse_matrix_file(read_json(matrix_path));
    const WilliamsonFactorization wf = williamson(v);
    Json j;
    j["kappa"] = wf.kappa;
    j["S"] = matrix_file(wf.s);
    out << dump(j) << '\n';
    return kExitOk;
  });
}

int run_reconstruct2(double m1, double m2, double k1, double k2, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (m1 > m2) std::swap(m1, m2);
    if (k1 > k2) std::swap(k1, k2);
    const Matrix v = reconstruct_two_mode(m1, m2, k1, k2);
    out << dump(matrix_file(v)) << '\n';
    return kExitOk;
  });
}

int run_random(int modes, std::uint64_t seed, double kappa_min, double kappa_max, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const RandomState rs = random_state(modes, seed, kappa_min, kappa_max);
    Json j = matrix_file(rs.v);
    j["kappa"] = rs.kappa;
    out << dump(j) << '\n';
    return kExitOk;
  });
}

}  // namespace gqmp::cli
