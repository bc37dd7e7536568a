// Copyright 2026 The Seizure FG Authors.
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

// Writes a small synthetic dataset and a random weight file for trying the
// pipeline without CHB-MIT.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "seizure_fg/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic dataset and weight file generator"};
  std::string out;
  std::uint64_t seed = 7;
  bool standard = false;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  app.add_flag("--standard-arch", standard, "Use the shipped (slower) architecture");
  CLI11_PARSE(app, argc, argv);

  using namespace seizure_fg;
  try {
    const std::filesystem::path root(out);
    synthetic::write_dataset(root / "dataset", synthetic::two_patient_fixture(), seed);
    synthetic::Rng rng(seed);
    const auto arch = standard ? CnnArchitecture::standard() : synthetic::tiny_architecture();
    save_weights(root / "weights.sfgw", synthetic::random_model(arch, rng));
    std::cout << "dataset: " << (root / "dataset").string() << '\n'
              << "weights: " << (root / "weights.sfgw").string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
