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
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "seizure_fg/error.hpp"
#include "seizure_fg/likelihood.hpp"

namespace seizure_fg {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

inline ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(predicted.size()) + " predictions for " +
                                               std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw Error(ErrorCode::kLengthMismatch, "nothing to score");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i]) {
      (truth[i] ? c.tp : c.fp) += 1;
    } else {
      (truth[i] ? c.fn : c.tn) += 1;
    }
  }
  return c;
}

struct F1Score {
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Any 0/0 ratio is taken as 0.
inline F1Score f1_precision_recall(const ConfusionCounts& c) {
  const auto ratio = [](double num, double den) { return den == 0.0 ? 0.0 : num / den; };
  F1Score s;
  s.precision = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  s.recall = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  s.f1 = ratio(2.0 * s.precision * s.recall, s.precision + s.recall);
  return s;
}

namespace metrics_detail {

// Cumulative (tp, fp) after admitting each group of tied scores, highest
// score first.
struct SweepPoint {
  double threshold;
  std::uint64_t tp;
  std::uint64_t fp;
};

inline std::vector<SweepPoint> sweep(std::span<const double> scores, std::span<const int> truth) {
  if (scores.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(scores.size()) + " scores for " +
                                               std::to_string(truth.size()) + " labels");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<SweepPoint> points;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (truth[order[i]] ? tp : fp) += 1;
    const bool group_ends =
        i + 1 == order.size() || scores[order[i + 1]] != scores[order[i]];
    if (group_ends) points.push_back({scores[order[i]], tp, fp});
  }
  return points;
}

inline std::pair<std::uint64_t, std::uint64_t> class_counts(std::span<const int> truth) {
  const auto positives = static_cast<std::uint64_t>(std::count(truth.begin(), truth.end(), 1));
  return {positives, truth.size() - positives};
}

}  // namespace metrics_detail

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;
};

struct PrPoint {
  double recall;
  double precision;
  double threshold;
};

// ROC polyline from (0, 0) through every distinct score threshold.
inline std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> truth) {
  const auto [positives, negatives] = metrics_detail::class_counts(truth);
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kUndefinedMetric, "ROC needs both classes");
  }
  std::vector<RocPoint> curve{{0.0, 0.0, INFINITY}};
  for (const auto& p : metrics_detail::sweep(scores, truth)) {
    curve.push_back({static_cast<double>(p.fp) / negatives, static_cast<double>(p.tp) / positives,
                     p.threshold});
  }
  return curve;
}

// Trapezoidal area under the ROC polyline; equals the Mann-Whitney
// statistic with ties counted as one half.
inline double auc_roc(std::span<const double> scores, std::span<const int> truth) {
  const auto [positives, negatives] = metrics_detail::class_counts(truth);
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kUndefinedMetric, "AUC-ROC needs both classes");
  }
  // Twice the area in units of 1 / (P * N), accumulated exactly.
  std::uint64_t twice_area = 0;
  std::uint64_t prev_tp = 0;
  std::uint64_t prev_fp = 0;
  for (const auto& p : metrics_detail::sweep(scores, truth)) {
    twice_area += (p.fp - prev_fp) * (p.tp + prev_tp);
    prev_tp = p.tp;
    prev_fp = p.fp;
  }
  return static_cast<double>(twice_area) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

inline std::vector<PrPoint> pr_curve(std::span<const double> scores, std::span<const int> truth) {
  const auto [positives, negatives] = metrics_detail::class_counts(truth);
  if (positives == 0) throw Error(ErrorCode::kUndefinedMetric, "PR curve needs a positive");
  std::vector<PrPoint> curve;
  for (const auto& p : metrics_detail::sweep(scores, truth)) {
    curve.push_back({static_cast<double>(p.tp) / positives,
                     static_cast<double>(p.tp) / static_cast<double>(p.tp + p.fp), p.threshold});
  }
  return curve;
}

// Step-wise area: sum over descending thresholds of (R_k - R_{k-1}) * P_k.
inline double auc_pr(std::span<const double> scores, std::span<const int> truth) {
  double area = 0.0;
  double previous_recall = 0.0;
  for (const auto& p : pr_curve(scores, truth)) {
    area += (p.recall - previous_recall) * p.precision;
    previous_recall = p.recall;
  }
  return area;
}

struct Fold {
  std::vector<std::string> test_patients;
  std::vector<std::string> train_patients;
};

struct FoldPlan {
  std::vector<Fold> folds;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kProtocolPatients = 24;
inline constexpr std::size_t kProtocolTestGroup = 4;

// Seeded Fisher-Yates over the sorted ids, then consecutive test groups.
// Without `test_group_size` the 24-patient, 4-per-fold protocol is enforced.
inline FoldPlan make_folds(std::vector<std::string> patients, std::uint64_t seed,
                           std::optional<std::size_t> test_group_size = std::nullopt) {
  std::sort(patients.begin(), patients.end());
  if (std::adjacent_find(patients.begin(), patients.end()) != patients.end()) {
    throw Error(ErrorCode::kPlan, "patient ids must be distinct");
  }
  std::size_t group = kProtocolTestGroup;
  if (test_group_size) {
    group = *test_group_size;
    if (group == 0 || group >= patients.size() || patients.size() % group != 0) {
      throw Error(ErrorCode::kPlan, "fold size " + std::to_string(group) +
                                        " does not evenly split " +
                                        std::to_string(patients.size()) +
                                        " patients into at least two folds");
    }
  } else if (patients.size() != kProtocolPatients) {
    throw Error(ErrorCode::kPlan, "expected 24 patients, got " + std::to_string(patients.size()) +
                                      "; pass an explicit fold size for other cohorts");
  }

  // mt19937_64 output is fully specified, unlike the standard distributions,
  // so the plan is identical across standard libraries.
  std::mt19937_64 engine(seed);
  const auto bounded = [&](std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
      draw = engine();
    } while (draw >= limit);
    return draw % bound;
  };
  for (std::size_t i = patients.size() - 1; i > 0; --i) {
    std::swap(patients[i], patients[bounded(i + 1)]);
  }

  FoldPlan plan;
  plan.seed = seed;
  for (std::size_t begin = 0; begin < patients.size(); begin += group) {
    Fold fold;
    for (std::size_t i = 0; i < patients.size(); ++i) {
      (i >= begin && i < begin + group ? fold.test_patients : fold.train_patients)
          .push_back(patients[i]);
    }
    std::sort(fold.test_patients.begin(), fold.test_patients.end());
    std::sort(fold.train_patients.begin(), fold.train_patients.end());
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

inline nlohmann::json fold_plan_to_json(const FoldPlan& plan) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& fold : plan.folds) {
    folds.push_back({{"test_patients", fold.test_patients}, {"train_patients", fold.train_patients}});
  }
  return {{"seed", plan.seed}, {"folds", folds}};
}

inline FoldPlan fold_plan_from_json(const nlohmann::json& j) {
  FoldPlan plan;
  try {
    plan.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& fold : j.at("folds")) {
      plan.folds.push_back({fold.at("test_patients").get<std::vector<std::string>>(),
                            fold.at("train_patients").get<std::vector<std::string>>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("fold plan: ") + e.what());
  }
  return plan;
}

// FLOPs of one layer; multiplications and additions count separately.
struct LayerFlops {
  std::string kind;
  std::uint64_t compute = 0;     // convolution / matmul / pooling work
  std::uint64_t activation = 0;  // one per activated element
  std::uint64_t total() const { return compute + activation; }
};

struct FlopBreakdown {
  std::vector<LayerFlops> layers;

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& l : layers) sum += l.total();
    return sum;
  }
  double mega() const { return static_cast<double>(total()) / 1e6; }
};

// Per-block inference FLOPs of `arch`:
//   conv1d      2 * kernel * C_in * C_out * L_out
//   dense       2 * in * out
//   max_pool    L_out * width * C comparisons
//   global_pool L_in * C
//   activation  1 per output element (none: 0); dropout 0.
inline FlopBreakdown cnn_flop_count(const CnnArchitecture& arch) {
  const auto shapes = arch.shapes();
  FlopBreakdown out;
  TensorShape in = arch.input_shape();
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const TensorShape& shape = shapes[i];
    LayerFlops flops;
    std::visit(
        [&](const auto& layer) {
          using T = std::decay_t<decltype(layer)>;
          if constexpr (std::is_same_v<T, Conv1d>) {
            flops.kind = "conv1d";
            flops.compute = 2ull * layer.kernel_size * in.channels * layer.out_channels * shape.length;
            if (layer.activation != Activation::kNone) flops.activation = shape.size();
          } else if constexpr (std::is_same_v<T, MaxPool>) {
            flops.kind = "max_pool";
            flops.compute = 1ull * shape.length * layer.width * shape.channels;
          } else if constexpr (std::is_same_v<T, GlobalPool>) {
            flops.kind = "global_pool";
            flops.compute = 1ull * in.size();
          } else if constexpr (std::is_same_v<T, Dense>) {
            flops.kind = "dense";
            flops.compute = 2ull * in.size() * layer.out_units;
            if (layer.activation != Activation::kNone) flops.activation = layer.out_units;
          } else {
            flops.kind = "dropout";
          }
        },
        arch.layers[i]);
    out.layers.push_back(flops);
    in = shape;
  }
  return out;
}

// Per-block totals quoted for other models; not recomputed here.
struct ReferenceFlops {
  std::string model;
  double mega_flops;
  std::string source;
};

inline const std::vector<ReferenceFlops>& reference_flops() {
  static const std::vector<ReferenceFlops> table{
      {"2D CNN (Boonyakitanont et al. 2019)", 14.5, "literature"},
      {"2D CNN (Gomez et al. 2020)", 200.0, "literature"},
      {"1D CNN", 9.81, "published"},
      {"1D CNN + FG", 9.81, "published"},
      {"1D CNN + GRU", 29.4, "published"},
  };
  return table;
}

struct SeriesMetrics {
  std::optional<double> auc_roc;
  std::optional<double> auc_pr;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  ConfusionCounts counts;
  // Threshold in the candidate set {0} ∪ scores maximizing F1 under the
  // strict "score > threshold" rule.
  double best_threshold = 0.0;
  double best_f1 = 0.0;
};

struct FoldMetrics {
  SeriesMetrics raw;
  SeriesMetrics smoothed;
};

inline SeriesMetrics score_series(std::span<const double> scores, std::span<const int> truth,
                                  double threshold) {
  SeriesMetrics m;
  std::vector<int> predicted;
  predicted.reserve(scores.size());
  for (double s : scores) predicted.push_back(s > threshold ? 1 : 0);
  m.counts = confusion(predicted, truth);
  const F1Score f = f1_precision_recall(m.counts);
  m.f1 = f.f1;
  m.precision = f.precision;
  m.recall = f.recall;
  const auto [positives, negatives] = metrics_detail::class_counts(truth);
  if (positives > 0 && negatives > 0) m.auc_roc = auc_roc(scores, truth);
  if (positives > 0) m.auc_pr = auc_pr(scores, truth);

  // Every cut of the descending sweep is a candidate; predicting nothing
  // positive corresponds to threshold = max score.
  m.best_f1 = -1.0;
  const auto points = metrics_detail::sweep(scores, truth);
  for (std::size_t k = 0; k <= points.size(); ++k) {
    if (k == points.size() && points.back().threshold <= 0.0) break;
    ConfusionCounts c;
    c.tp = k == 0 ? 0 : points[k - 1].tp;
    c.fp = k == 0 ? 0 : points[k - 1].fp;
    c.fn = positives - c.tp;
    c.tn = negatives - c.fp;
    const double f1 = f1_precision_recall(c).f1;
    const double cut = k < points.size() ? points[k].threshold : 0.0;
    if (f1 > m.best_f1) {
      m.best_f1 = f1;
      m.best_threshold = cut;
    }
  }
  return m;
}

// Metrics of the classifier-only and the smoothed series on one fold.
inline FoldMetrics evaluate_fold(std::span<const double> raw, std::span<const double> smoothed,
                                 std::span<const int> truth, double threshold) {
  if (raw.size() != truth.size() || smoothed.size() != truth.size()) {
    throw Error(ErrorCode::kLengthMismatch, "series and labels differ in length");
  }
  return {score_series(raw, truth, threshold), score_series(smoothed, truth, threshold)};
}

struct MeanStd {
  std::optional<double> mean;
  std::optional<double> std;
  std::size_t count = 0;
};

// Sample standard deviation over the defined values; std is 0 for a single
// value and absent when none are defined.
inline MeanStd mean_std(std::span<const std::optional<double>> values) {
  std::vector<double> defined;
  for (const auto& v : values) {
    if (v) defined.push_back(*v);
  }
  MeanStd out;
  out.count = defined.size();
  if (defined.empty()) return out;
  const double mean = std::accumulate(defined.begin(), defined.end(), 0.0) / defined.size();
  double ss = 0.0;
  for (double v : defined) ss += (v - mean) * (v - mean);
  out.mean = mean;
  out.std = defined.size() > 1 ? std::sqrt(ss / (defined.size() - 1)) : 0.0;
  return out;
}

}  // namespace seizure_fg
