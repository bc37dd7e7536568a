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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seizure_fg/pipeline.hpp"

namespace {

using namespace seizure_fg;

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> labels;
  std::stringstream in(text);
  std::string label;
  while (std::getline(in, label, ',')) labels.push_back(label);
  return labels;
}

CnnArchitecture architecture_from(const std::string& weights, const std::string& arch_json) {
  if (!weights.empty()) return load_weights(weights).architecture;
  if (!arch_json.empty()) {
    std::ifstream in(arch_json);
    if (!in) throw Error(ErrorCode::kIo, "cannot open '" + arch_json + "'");
    try {
      return architecture_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, arch_json + ": " + e.what());
    }
  }
  return CnnArchitecture::standard();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seizure detection with a CNN likelihood and exact HMM smoothing"};
  app.set_version_flag("--version", std::string(SEIZURE_FG_VERSION));
  app.set_config("--config", "", "TOML/INI file with flag defaults (flags override)");
  app.require_subcommand(1);

  // ingest
  pipeline::IngestOptions ingest;
  std::string data_root, ingest_out, montage;
  auto* ingest_cmd = app.add_subcommand("ingest", "EDF + summaries -> labelled block tensors");
  ingest_cmd->add_option("--data-root", data_root, "Directory of patient folders")->required();
  ingest_cmd->add_option("--out", ingest_out, "Output directory")->required();
  ingest_cmd->add_option("--montage", montage, "Comma-separated 18 bipolar labels");
  ingest_cmd->add_option("--notch-freq", ingest.filter.notch_freq, "Notch frequency (Hz)")
      ->capture_default_str();
  ingest_cmd->add_option("--quality", ingest.filter.quality_factor, "Notch quality factor")
      ->capture_default_str();
  ingest_cmd->add_option("--window", ingest.window_s, "Block length (s)")->capture_default_str();
  ingest_cmd->add_option("--stride", ingest.stride_s, "Block stride (s)")->capture_default_str();

  // infer
  pipeline::InferOptions infer;
  std::string blocks_dir;
  auto* infer_cmd = app.add_subcommand("infer", "Run the CNN on every block");
  infer_cmd->add_option("--blocks", blocks_dir, "Directory written by ingest")->required();
  std::string weights_path;
  infer_cmd->add_option("--weights", weights_path, "Weight file")->required();
  std::string infer_out;
  infer_cmd->add_option("--out", infer_out, "Probability CSV")->required();

  // smooth
  pipeline::SmoothOptions smooth_opts;
  std::string smooth_manifest, smooth_probs, smooth_out;
  std::optional<double> initial_seizure;
  std::optional<std::size_t> lag;
  auto* smooth_cmd = app.add_subcommand("smooth", "Sum-product smoothing per recording");
  smooth_cmd->add_option("--manifest", smooth_manifest, "Block manifest CSV")->required();
  smooth_cmd->add_option("--probabilities", smooth_probs, "Probability CSV")->required();
  smooth_cmd->add_option("--out", smooth_out, "Marginal CSV")->required();
  smooth_cmd->add_option("--p01", smooth_opts.p01, "P(seizure | non-seizure)")->capture_default_str();
  smooth_cmd->add_option("--p10", smooth_opts.p10, "P(non-seizure | seizure)")->capture_default_str();
  smooth_cmd->add_option("--initial-seizure", initial_seizure,
                         "Initial P(seizure); stationary if omitted");
  smooth_cmd->add_option("--threshold", smooth_opts.threshold, "Detection threshold")
      ->capture_default_str();
  smooth_cmd->add_option("--lag", lag, "Fixed-lag streaming mode with this lag (approximate)");

  // evaluate
  pipeline::EvaluateOptions eval;
  std::string eval_manifest, eval_marginals, eval_out, eval_weights, eval_arch;
  std::optional<std::size_t> fold_size;
  auto* eval_cmd = app.add_subcommand("evaluate", "Leave-patients-out scoring and report");
  eval_cmd->add_option("--manifest", eval_manifest, "Block manifest CSV")->required();
  eval_cmd->add_option("--marginals", eval_marginals, "Marginal CSV from smooth")->required();
  eval_cmd->add_option("--out", eval_out, "Report directory")->required();
  eval_cmd->add_option("--seed", eval.seed, "Fold assignment seed")->required();
  eval_cmd->add_option("--threshold", eval.threshold, "Detection threshold")->capture_default_str();
  eval_cmd->add_option("--fold-size", fold_size,
                       "Test patients per fold (overrides the 24-patient protocol)");
  eval_cmd->add_option("--weights", eval_weights, "Weight file, for CNN FLOP totals");
  eval_cmd->add_option("--arch", eval_arch, "Architecture JSON, for CNN FLOP totals");

  // flops
  std::string flops_weights, flops_arch;
  std::int64_t flops_blocks = 1000;
  auto* flops_cmd = app.add_subcommand("flops", "FLOP table");
  flops_cmd->add_option("--weights", flops_weights, "Weight file to take the architecture from");
  flops_cmd->add_option("--arch", flops_arch, "Architecture JSON (default: shipped stack)");
  flops_cmd->add_option("--blocks", flops_blocks, "Block count N for the smoother")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest_cmd->parsed()) {
      ingest.data_root = data_root;
      ingest.out_dir = ingest_out;
      if (!montage.empty()) ingest.montage = MontageSpec(split_labels(montage));
      pipeline::cmd_ingest(ingest, std::cout);
    } else if (infer_cmd->parsed()) {
      infer.manifest = std::filesystem::path(blocks_dir) / pipeline::kManifestFile;
      infer.tensors = std::filesystem::path(blocks_dir) / pipeline::kTensorFile;
      infer.weights = weights_path;
      infer.out = infer_out;
      pipeline::cmd_infer(infer, std::cout);
    } else if (smooth_cmd->parsed()) {
      smooth_opts.manifest = smooth_manifest;
      smooth_opts.probabilities = smooth_probs;
      smooth_opts.out = smooth_out;
      smooth_opts.initial_seizure = initial_seizure;
      smooth_opts.streaming_lag = lag;
      pipeline::cmd_smooth(smooth_opts, std::cout);
    } else if (eval_cmd->parsed()) {
      eval.manifest = eval_manifest;
      eval.marginals = eval_marginals;
      eval.out_dir = eval_out;
      eval.fold_size = fold_size;
      if (!eval_weights.empty() || !eval_arch.empty()) {
        eval.architecture = architecture_from(eval_weights, eval_arch);
      }
      eval.config_hash = pipeline::config_hash(eval_cmd->config_to_str(true, false));
      pipeline::cmd_evaluate(eval, std::cout);
    } else if (flops_cmd->parsed()) {
      pipeline::cmd_flops(architecture_from(flops_weights, flops_arch), flops_blocks, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return EXIT_FAILURE;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
