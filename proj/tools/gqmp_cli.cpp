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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gqmp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Gaussian marginal spectra: compatibility, synthesis and decomposition"};
  app.require_subcommand(1);

  std::string global_path;
  std::string local_path;
  auto* check = app.add_subcommand("check", "test whether global parameters dominate local parameters");
  check->add_option("global", global_path, "vector file with the global spectrum")->required();
  check->add_option("local", local_path, "vector file with the local spectrum")->required();

  std::string out_path;
  std::string trace_path;
  auto* synth = app.add_subcommand("synthesize", "build a state with the given global and local spectra");
  synth->add_option("global", global_path, "vector file with the global spectrum")->required();
  synth->add_option("local", local_path, "vector file with the local spectrum")->required();
  synth->add_option("-o,--out", out_path, "output file for V and S")->required();
  synth->add_option("--trace", trace_path, "optional step trace output");

  std::string matrix_path;
  auto* decompose = app.add_subcommand("decompose", "global and local spectra of a covariance matrix");
  decompose->add_option("matrix", matrix_path, "matrix file")->required();

  auto* will = app.add_subcommand("williamson", "Williamson factorization of a covariance matrix");
  will->add_option("matrix", matrix_path, "matrix file")->required();

  double m1 = 0, m2 = 0, k1 = 0, k2 = 0;
  auto* rec = app.add_subcommand("reconstruct2", "two-mode state from its local and global spectra");
  rec->add_option("--m1", m1)->required();
  rec->add_option("--m2", m2)->required();
  rec->add_option("--k1", k1)->required();
  rec->add_option("--k2", k2)->required();

  int modes = 2;
  std::uint64_t seed = 0;
  double kappa_min = 1.0;
  double kappa_max = 5.0;
  auto* random = app.add_subcommand("random", "seeded random physical covariance matrix");
  random->add_option("--modes", modes)->required()->check(CLI::PositiveNumber);
  random->add_option("--seed", seed)->required();
  random->add_option("--kappa-min", kappa_min, "lower end of the global parameter range (>= 1)");
  random->add_option("--kappa-max", kappa_max, "upper end of the global parameter range");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  namespace cli = gqmp::cli;
  if (*check) return cli::run_check(global_path, local_path, std::cout, std::cerr);
  if (*synth) {
    const std::optional<std::string> trace = trace_path.empty() ? std::nullopt : std::optional(trace_path);
    return cli::run_synthesize(global_path, local_path, out_path, trace, std::cout, std::cerr);
  }
  if (*decompose) return cli::run_decompose(matrix_path, std::cout, std::cerr);
  if (*will) return cli::run_williamson(matrix_path, std::cout, std::cerr);
  if (*rec) return cli::run_reconstruct2(m1, m2, k1, k2, std::cout, std::cerr);
  if (*random) return cli::run_random(modes, seed, kappa_min, kappa_max, std::cout, std::cerr);
  return 2;
}
