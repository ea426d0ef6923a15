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

// Command implementations behind the `gqmp` executable. Each returns the
// process exit code: 0 success/compatible, 1 incompatible or verification
// failure, 2 input error, 3 numerical failure. Results go to `out` as JSON,
// diagnostics to `err`.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "gqmp/symplectic.hpp"

namespace gqmp::cli {

using Json = nlohmann::ordered_json;

/// Compact JSON with doubles printed to 17 significant digits.
std::string dump(const Json& j);

/// {"values": [...]} or a bare array of positive reals.
SpectralVector parse_vector_file(const Json& j);
/// {"n": n, "data": [4 n^2 reals, row-major]}.
Matrix parse_matrix_file(const Json& j);
Json matrix_file(const Matrix& m);

Json read_json(const std::string& path);

int run_check(const std::string& global_path, const std::string& local_path, std::ostream& out, std::ostream& err);

int run_synthesize(const std::string& global_path, const std::string& local_path, const std::string& out_path,
                   const std::optional<std::string>& trace_path, std::ostream& out, std::ostream& err);

int run_decompose(const std::string& matrix_path, std::ostream& out, std::ostream& err);

int run_williamson(const std::string& matrix_path, std::ostream& out, std::ostream& err);

int run_reconstruct2(double m1, double m2, double k1, double k2, std::ostream& out, std::ostream& err);

int run_random(int modes, std::uint64_t seed, double kappa_min, double kappa_max, std::ostream& out,
               std::ostream& err);

}  // namespace gqmp::cli
