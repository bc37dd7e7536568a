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

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "seizure_fg/error.hpp"
#include "seizure_fg/evaluation.hpp"
#include "seizure_fg/inference.hpp"
#include "seizure_fg/io.hpp"
#include "seizure_fg/likelihood.hpp"
#include "seizure_fg/preprocess.hpp"
#include "seizure_fg/signal_io.hpp"

#ifndef SEIZURE_FG_VERSION
#define SEIZURE_FG_VERSION "0.0.0"
#endif

// End-to-end commands behind the CLI. Each command reads its inputs, writes
// its outputs atomically and logs a human-readable summary to `log`.
namespace seizure_fg::pipeline {

inline constexpr const char* kToolName = "seizure-fg";
inline constexpr const char* kManifestFile = "blocks.csv";
inline constexpr const char* kTensorFile = "blocks.bin";

// FNV-1a, rendered as 16 hex digits.
inline std::string config_hash(std::string_view canonical) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  std::filesystem::path data_root;
  std::filesystem::path out_dir;
  MontageSpec montage = MontageSpec::standard();
  FilterSpec filter;
  int window_s = kWindowSeconds;
  int stride_s = kStrideSeconds;
};

struct PatientCounts {
  std::size_t files = 0;
  std::size_t blocks = 0;
  std::size_t seizure_blocks = 0;
};

struct IngestSummary {
  std::map<std::string, PatientCounts> patients;
  std::vector<std::string> file_errors;
  std::size_t blocks = 0;
};

inline std::optional<std::filesystem::path> find_summary(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 12 &&
        name.compare(name.size() - 12, 12, "-summary.txt") == 0) {
      found.push_back(entry.path());
    }
  }
  if (found.empty()) return std::nullopt;
  std::sort(found.begin(), found.end());
  return found.front();
}

// Keeps only files with at least one seizure; filters, trims, segments and
// labels them into <out_dir>/blocks.csv and <out_dir>/blocks.bin.
inline IngestSummary cmd_ingest(const IngestOptions& options, std::ostream& log) {
  if (!std::filesystem::is_directory(options.data_root)) {
    throw Error(ErrorCode::kIo, "dataset root '" + options.data_root.string() + "' not found");
  }
  std::vector<std::filesystem::path> patient_dirs;
  for (const auto& entry : std::filesystem::directory_iterator(options.data_root)) {
    if (entry.is_directory()) patient_dirs.push_back(entry.path());
  }
  std::sort(patient_dirs.begin(), patient_dirs.end());

  IngestSummary summary;
  std::vector<BlockRecord> manifest;
  BlockTensorWriter tensors(options.out_dir / kTensorFile);
  for (const auto& dir : patient_dirs) {
    const std::string patient = dir.filename().string();
    const auto summary_path = find_summary(dir);
    if (!summary_path) {
      throw Error(ErrorCode::kIo, "patient " + patient + ": missing summary file");
    }
    std::ifstream summary_in(*summary_path);
    std::vector<SummaryEntry> entries;
    try {
      entries = parse_summary(summary_in);
    } catch (const Error& e) {
      throw Error(e.code(), "patient " + patient + ": " + e.what());
    }
    for (const auto& entry : entries) {
      if (entry.seizures.empty()) continue;
      const auto edf_path = dir / (entry.file_id + ".edf");
      try {
        Recording raw = read_edf(edf_path);
        raw.patient_id = patient;
        if (raw.sample_rate != kSampleRate) {
          throw Error(ErrorCode::kValidation, "sample rate " + std::to_string(raw.sample_rate) +
                                                  " Hz, expected 256 Hz");
        }
        const Recording filtered = notch_filter(apply_montage(raw, options.montage), options.filter);
        const auto pieces = trim_around_seizures(filtered, entry.seizures);
        // Reject the whole file before any of its blocks are written.
        for (const auto& piece : pieces) {
          if (piece.recording.duration_s < options.window_s) {
            throw Error(ErrorCode::kEmptySequence, "trimmed segment shorter than one window");
          }
        }
        PatientCounts& counts = summary.patients[patient];
        ++counts.files;
        for (const auto& piece : pieces) {
          const BlockSequence sequence = segment(piece.recording, piece.annotations,
                                                 options.window_s, options.stride_s);
          for (const auto& block : sequence.blocks) {
            tensors.append(block);
            manifest.push_back({patient, entry.file_id, block.start_s, block.label});
            ++counts.blocks;
            counts.seizure_blocks += static_cast<std::size_t>(block.label);
          }
        }
      } catch (const Error& e) {
        summary.file_errors.push_back(edf_path.filename().string() + ": " + e.what());
        log << "error: " << summary.file_errors.back() << '\n';
      }
    }
  }
  if (manifest.empty()) {
    throw Error(ErrorCode::kEmptySequence, "no usable recordings under '" +
                                               options.data_root.string() + "'");
  }
  tensors.finish();
  write_manifest(options.out_dir / kManifestFile, manifest);
  summary.blocks = manifest.size();

  log << "patient,files,blocks,seizure_blocks\n";
  for (const auto& [patient, counts] : summary.patients) {
    log << patient << ',' << counts.files << ',' << counts.blocks << ',' << counts.seizure_blocks
        << '\n';
  }
  log << "total blocks: " << summary.blocks << '\n';
  if (!summary.file_errors.empty()) {
    log << summary.file_errors.size() << " file(s) skipped\n";
  }
  return summary;
}

// ----------------------------------------------------------------- infer

struct InferOptions {
  std::filesystem::path manifest;
  std::filesystem::path tensors;
  std::filesystem::path weights;
  std::filesystem::path out;
};

struct InferSummary {
  std::size_t blocks = 0;
  std::uint64_t flops_per_block = 0;
  std::uint64_t total_flops = 0;
};

inline InferSummary cmd_infer(const InferOptions& options, std::ostream& log) {
  const auto manifest = read_manifest(options.manifest);
  if (manifest.empty()) throw Error(ErrorCode::kEmptySequence, "no blocks in manifest");
  const Model model = load_weights(options.weights);
  BlockTensorReader reader(options.tensors);
  if (reader.count() != manifest.size()) {
    throw Error(ErrorCode::kAlignment, "tensor file holds " + std::to_string(reader.count()) +
                                           " blocks, manifest lists " +
                                           std::to_string(manifest.size()));
  }
  if (reader.time_steps() != model.architecture.input_length ||
      reader.channels() != model.architecture.input_channels) {
    throw Error(ErrorCode::kShape, "block tensors do not match the network input shape");
  }
  ProbabilitySeries series;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    series.values.push_back(forward(reader.read(i), model));
    series.blocks.push_back({manifest[i].patient_id, manifest[i].file_id, manifest[i].start_s});
  }
  write_probabilities(options.out, series);

  InferSummary summary;
  summary.blocks = manifest.size();
  summary.flops_per_block = cnn_flop_count(model.architecture).total();
  summary.total_flops = summary.flops_per_block * summary.blocks;
  log << "blocks: " << summary.blocks << '\n';
  log << "CNN FLOPs: " << summary.flops_per_block << " per block x " << summary.blocks
      << " blocks = " << summary.total_flops << '\n';
  return summary;
}

// ---------------------------------------------------------------- smooth

struct SmoothOptions {
  std::filesystem::path manifest;
  std::filesystem::path probabilities;
  std::filesystem::path out;
  double p01 = TransitionModel::kDefaultOnset;
  double p10 = TransitionModel::kDefaultOffset;
  std::optional<double> initial_seizure;  // stationary when absent
  double threshold = 0.5;
  std::optional<std::size_t> streaming_lag;  // fixed-lag mode when set
  double stride_s = kStrideSeconds;
};

struct SmoothSummary {
  std::size_t blocks = 0;
  std::size_t chains = 0;
  std::uint64_t flops = 0;
};

// Manifest indices grouped into chains: one per file, split wherever
// consecutive blocks are not exactly one stride apart (separately trimmed
// pieces of a file are not Markov-adjacent).
inline std::vector<std::vector<std::size_t>> chains_of(const std::vector<BlockRecord>& manifest,
                                                       double stride_s) {
  std::map<std::string, std::vector<std::size_t>> by_file;
  for (std::size_t i = 0; i < manifest.size(); ++i) by_file[manifest[i].file_id].push_back(i);
  std::vector<std::vector<std::size_t>> chains;
  for (auto& [file, indices] : by_file) {
    std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return manifest[a].start_s < manifest[b].start_s;
    });
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const bool contiguous =
          k > 0 && std::abs(manifest[indices[k]].start_s - manifest[indices[k - 1]].start_s -
                            stride_s) < 1e-9;
      if (!contiguous) chains.emplace_back();
      chains.back().push_back(indices[k]);
    }
  }
  return chains;
}

struct MarginalRow {
  std::string file_id;
  double start_s = 0.0;
  double q_raw = 0.0;
  double q_smoothed = 0.0;
  int detected = 0;
};

inline const std::vector<std::string>& marginal_header() {
  static const std::vector<std::string> header{"file_id", "start_s", "q_raw", "q_smoothed",
                                               "detected"};
  return header;
}

inline SmoothSummary cmd_smooth(const SmoothOptions& options, std::ostream& log) {
  if (!std::filesystem::exists(options.probabilities)) {
    throw Error(ErrorCode::kIo, "probability file '" + options.probabilities.string() +
                                    "' not found");
  }
  const auto manifest = read_manifest(options.manifest);
  if (manifest.empty()) throw Error(ErrorCode::kEmptySequence, "no blocks in manifest");
  const ProbabilitySeries probabilities = load_probabilities(options.probabilities, manifest);
  std::optional<std::array<double, 2>> initial;
  if (options.initial_seizure) {
    initial = std::array<double, 2>{1.0 - *options.initial_seizure, *options.initial_seizure};
  }
  const TransitionModel model(options.p01, options.p10, initial);
  const DetectorConfig detector{options.threshold};

  std::vector<double> smoothed(manifest.size());
  const auto chains = chains_of(manifest, options.stride_s);
  for (const auto& chain : chains) {
    std::vector<double> q;
    for (auto index : chain) q.push_back(probabilities.values[index]);
    const MarginalSeries marginals =
        options.streaming_lag ? smooth_fixed_lag(q, model, *options.streaming_lag)
                              : smooth(q, model);
    for (std::size_t k = 0; k < chain.size(); ++k) smoothed[chain[k]] = marginals.values[k];
  }
  const auto detected = detect(MarginalSeries{smoothed}, detector);

  io::write_atomically(options.out, [&](std::ostream& out) {
    out << "file_id,start_s,q_raw,q_smoothed,detected\n";
    for (std::size_t i = 0; i < manifest.size(); ++i) {
      out << manifest[i].file_id << ',' << io::format_double(manifest[i].start_s) << ','
          << io::format_double(probabilities.values[i]) << ',' << io::format_double(smoothed[i])
          << ',' << detected[i] << '\n';
    }
  });

  SmoothSummary summary{manifest.size(), chains.size(),
                        fg_flop_count(static_cast<std::int64_t>(manifest.size()))};
  log << "chains: " << summary.chains << ", blocks: " << summary.blocks
      << (options.streaming_lag ? " (fixed-lag, approximate)" : "") << '\n';
  log << "FG FLOPs: " << kFgFlopsPerBlock << " x " << summary.blocks << " = " << summary.flops
      << '\n';
  return summary;
}

inline std::vector<MarginalRow> read_marginals(const std::filesystem::path& path) {
  std::vector<MarginalRow> rows;
  std::size_t line = 1;
  for (const auto& fields : io::read_csv(path, marginal_header())) {
    const std::string context = "marginal row " + std::to_string(++line);
    MarginalRow row{fields[0], io::parse_double(fields[1], context),
                    io::parse_double(fields[2], context), io::parse_double(fields[3], context),
                    fields[4] == "1" ? 1 : 0};
    if (!(row.q_raw >= 0.0 && row.q_raw <= 1.0 && row.q_smoothed >= 0.0 &&
          row.q_smoothed <= 1.0)) {
      throw Error(ErrorCode::kRange, context + ": probability outside [0,1]");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// -------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::filesystem::path manifest;
  std::filesystem::path marginals;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  std::optional<std::size_t> fold_size;
  std::optional<CnnArchitecture> architecture;  // for FLOP totals
  std::string config_hash;
};

inline nlohmann::json percent_or_null(const std::optional<double>& value) {
  return value ? nlohmann::json(*value * 100.0) : nlohmann::json(nullptr);
}

inline nlohmann::json series_to_json(const SeriesMetrics& m) {
  return {{"auc_roc", percent_or_null(m.auc_roc)},
          {"auc_pr", percent_or_null(m.auc_pr)},
          {"f1", m.f1 * 100.0},
          {"precision", m.precision * 100.0},
          {"recall", m.recall * 100.0},
          {"confusion", {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn},
                         {"fn", m.counts.fn}}},
          {"best_f1", m.best_f1 * 100.0},
          {"best_f1_threshold", m.best_threshold}};
}

inline nlohmann::json summary_to_json(const std::vector<SeriesMetrics>& folds) {
  nlohmann::json out;
  auto add = [&](const char* name, auto get) {
    std::vector<std::optional<double>> values;
    for (const auto& m : folds) values.push_back(get(m));
    const MeanStd s = mean_std(values);
    out[name] = {{"mean", percent_or_null(s.mean)}, {"std", percent_or_null(s.std)},
                 {"folds", s.count}};
  };
  add("auc_roc", [](const SeriesMetrics& m) { return m.auc_roc; });
  add("auc_pr", [](const SeriesMetrics& m) { return m.auc_pr; });
  add("f1", [](const SeriesMetrics& m) { return std::optional<double>(m.f1); });
  add("precision", [](const SeriesMetrics& m) { return std::optional<double>(m.precision); });
  add("recall", [](const SeriesMetrics& m) { return std::optional<double>(m.recall); });
  return out;
}

inline nlohmann::json reference_flops_json() {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reference_flops()) {
    rows.push_back({{"model", r.model}, {"mega_flops", r.mega_flops}, {"source", r.source}});
  }
  return rows;
}

struct EvaluateSummary {
  nlohmann::json report;
  std::vector<FoldMetrics> folds;
};

// Pooled per-fold scoring of raw and smoothed series; writes report.json,
// folds.csv, fold_plan.json and curves/fold<k>_{roc,pr}.csv.
inline EvaluateSummary cmd_evaluate(const EvaluateOptions& options, std::ostream& log) {
  const auto manifest = read_manifest(options.manifest);
  const auto rows = read_marginals(options.marginals);
  if (manifest.empty()) throw Error(ErrorCode::kEmptySequence, "no blocks in manifest");
  if (rows.size() != manifest.size()) {
    throw Error(ErrorCode::kAlignment, "manifest lists " + std::to_string(manifest.size()) +
                                           " blocks but marginal file has " +
                                           std::to_string(rows.size()));
  }
  std::map<std::pair<std::string, double>, std::size_t> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!row_of.emplace(std::make_pair(rows[i].file_id, rows[i].start_s), i).second) {
      throw Error(ErrorCode::kAlignment, "duplicate marginal row (" + rows[i].file_id + ", " +
                                             io::format_double(rows[i].start_s) + ")");
    }
  }
  std::vector<std::size_t> aligned(manifest.size());
  std::set<std::string> patient_set;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    auto it = row_of.find({manifest[i].file_id, manifest[i].start_s});
    if (it == row_of.end()) {
      throw Error(ErrorCode::kAlignment, "no marginal row for block (" + manifest[i].file_id +
                                             ", " + io::format_double(manifest[i].start_s) + ")");
    }
    aligned[i] = it->second;
    patient_set.insert(manifest[i].patient_id);
  }

  const FoldPlan plan = make_folds({patient_set.begin(), patient_set.end()}, options.seed,
                                   options.fold_size);
  EvaluateSummary result;
  nlohmann::json folds_json = nlohmann::json::array();
  std::vector<SeriesMetrics> raw_folds;
  std::vector<SeriesMetrics> smoothed_folds;
  std::ostringstream folds_csv;
  folds_csv << "fold,series,test_patients,blocks,positives,auc_roc,auc_pr,f1,precision,recall\n";
  const auto curves_dir = options.out_dir / "curves";

  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const std::set<std::string> test(plan.folds[f].test_patients.begin(),
                                     plan.folds[f].test_patients.end());
    std::vector<double> raw;
    std::vector<double> smoothed;
    std::vector<int> truth;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
      if (!test.count(manifest[i].patient_id)) continue;
      raw.push_back(rows[aligned[i]].q_raw);
      smoothed.push_back(rows[aligned[i]].q_smoothed);
      truth.push_back(manifest[i].label);
    }
    const FoldMetrics metrics = evaluate_fold(raw, smoothed, truth, options.threshold);
    const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), 1));
    if (!metrics.raw.auc_roc) {
      warn("fold " + std::to_string(f) + " has a single class; AUC-ROC reported as null");
    }
    if (!metrics.raw.auc_pr) {
      warn("fold " + std::to_string(f) + " has no seizure blocks; AUC-PR reported as null");
    }
    result.folds.push_back(metrics);
    raw_folds.push_back(metrics.raw);
    smoothed_folds.push_back(metrics.smoothed);

    std::string patients;
    for (const auto& p : plan.folds[f].test_patients) patients += (patients.empty() ? "" : ";") + p;
    folds_json.push_back({{"fold", f},
                          {"test_patients", plan.folds[f].test_patients},
                          {"blocks", truth.size()},
                          {"positives", positives},
                          {"raw", series_to_json(metrics.raw)},
                          {"smoothed", series_to_json(metrics.smoothed)}});
    auto csv_value = [](const std::optional<double>& v) {
      return v ? io::format_double(*v * 100.0) : std::string();
    };
    for (const auto& [name, m] : {std::pair<const char*, const SeriesMetrics&>{"raw", metrics.raw},
                                  {"smoothed", metrics.smoothed}}) {
      folds_csv << f << ',' << name << ',' << patients << ',' << truth.size() << ',' << positives
                << ',' << csv_value(m.auc_roc) << ',' << csv_value(m.auc_pr) << ','
                << io::format_double(m.f1 * 100.0) << ',' << io::format_double(m.precision * 100.0)
                << ',' << io::format_double(m.recall * 100.0) << '\n';
    }

    const std::string stem = "fold" + std::to_string(f);
    io::write_atomically(curves_dir / (stem + "_roc.csv"), [&](std::ostream& out) {
      out << "series,fpr,tpr\n";
      if (!metrics.raw.auc_roc) return;
      for (const auto& [name, scores] : {std::pair<const char*, const std::vector<double>&>{"raw", raw},
                                         {"smoothed", smoothed}}) {
        for (const auto& p : roc_curve(scores, truth)) {
          out << name << ',' << io::format_double(p.fpr) << ',' << io::format_double(p.tpr) << '\n';
        }
      }
    });
    io::write_atomically(curves_dir / (stem + "_pr.csv"), [&](std::ostream& out) {
      out << "series,recall,precision\n";
      if (!metrics.raw.auc_pr) return;
      for (const auto& [name, scores] : {std::pair<const char*, const std::vector<double>&>{"raw", raw},
                                         {"smoothed", smoothed}}) {
        for (const auto& p : pr_curve(scores, truth)) {
          out << name << ',' << io::format_double(p.recall) << ','
              << io::format_double(p.precision) << '\n';
        }
      }
    });
  }

  nlohmann::json flops = {{"fg_per_block", kFgFlopsPerBlock},
                          {"blocks", manifest.size()},
                          {"fg_total", fg_flop_count(static_cast<std::int64_t>(manifest.size()))},
                          {"reference", reference_flops_json()}};
  if (options.architecture) {
    const std::uint64_t per_block = cnn_flop_count(*options.architecture).total();
    flops["cnn_per_block"] = per_block;
    flops["cnn_mega_flops_per_block"] = static_cast<double>(per_block) / 1e6;
    flops["cnn_total"] = per_block * manifest.size();
  } else {
    flops["cnn_per_block"] = nullptr;
    flops["cnn_mega_flops_per_block"] = nullptr;
    flops["cnn_total"] = nullptr;
  }

  result.report = {{"tool", {{"name", kToolName}, {"version", SEIZURE_FG_VERSION}}},
                   {"config_hash", options.config_hash},
                   {"threshold", options.threshold},
                   {"units", "percent"},
                   {"fold_plan", fold_plan_to_json(plan)},
                   {"folds", folds_json},
                   {"summary", {{"raw", summary_to_json(raw_folds)},
                                {"smoothed", summary_to_json(smoothed_folds)}}},
                   {"flops", flops}};

  io::write_atomically(options.out_dir / "report.json",
                       [&](std::ostream& out) { out << result.report.dump(2) << '\n'; });
  io::write_atomically(options.out_dir / "fold_plan.json",
                       [&](std::ostream& out) { out << fold_plan_to_json(plan).dump(2) << '\n'; });
  io::write_atomically(options.out_dir / "folds.csv",
                       [&](std::ostream& out) { out << folds_csv.str(); });

  const auto& summary = result.report["summary"];
  auto show = [&](const char* series, const char* metric) {
    const auto& s = summary[series][metric];
    log << "  " << metric << ": "
        << (s["mean"].is_null() ? std::string("n/a") : io::format_double(s["mean"].get<double>()))
        << " +- "
        << (s["std"].is_null() ? std::string("n/a") : io::format_double(s["std"].get<double>()))
        << '\n';
  };
  for (const char* series : {"raw", "smoothed"}) {
    log << series << " (" << plan.folds.size() << " folds, %):\n";
    for (const char* metric : {"auc_roc", "auc_pr", "f1", "precision", "recall"}) {
      show(series, metric);
    }
  }
  return result;
}

// ----------------------------------------------------------------- flops

struct FlopsRow {
  std::string model;
  double mega_flops = 0.0;
  std::string source;
};

// Configured network (computed), the chain smoother at `blocks` blocks
// (computed) and the quoted literature figures.
inline std::vector<FlopsRow> cmd_flops(const CnnArchitecture& architecture, std::int64_t blocks,
                                       std::ostream& log) {
  architecture.validate();
  const FlopBreakdown cnn = cnn_flop_count(architecture);
  const std::uint64_t fg = fg_flop_count(blocks);
  std::vector<FlopsRow> rows{
      {"1D CNN (configured), per block", cnn.mega(), "computed"},
      {"FG sum-product, " + std::to_string(blocks) + " blocks (" + std::to_string(fg) + " FLOPs)",
       static_cast<double>(fg) / 1e6, "computed"},
  };
  for (const auto& r : reference_flops()) rows.push_back({r.model, r.mega_flops, r.source});

  log << "layer,kind,flops\n";
  for (std::size_t i = 0; i < cnn.layers.size(); ++i) {
    log << i << ',' << cnn.layers[i].kind << ',' << cnn.layers[i].total() << '\n';
  }
  log << "receptive field: " << architecture.receptive_field() << " samples\n\n";
  log << "model,mega_flops,source\n";
  for (const auto& row : rows) {
    log << row.model << ',' << io::format_double(row.mega_flops) << ',' << row.source << '\n';
  }
  return rows;
}

}  // namespace seizure_fg::pipeline
