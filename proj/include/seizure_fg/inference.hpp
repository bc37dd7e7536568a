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

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seizure_fg/error.hpp"
#include "seizure_fg/io.hpp"
#include "seizure_fg/likelihood.hpp"

namespace seizure_fg {

// Evidence pair (P(y_i | s_i = 0), P(y_i | s_i = 1)).
using Evidence = std::array<double, 2>;

// First-order two-state chain. State 1 is seizure.
class TransitionModel {
 public:
  static constexpr double kDefaultOnset = 0.1046;   // P(s_i = 1 | s_{i-1} = 0)
  static constexpr double kDefaultOffset = 0.179;   // P(s_i = 0 | s_{i-1} = 1)

  TransitionModel() : TransitionModel(kDefaultOnset, kDefaultOffset) {}

  // Without `initial`, the chain starts in its stationary distribution.
  TransitionModel(double p01, double p10, std::optional<std::array<double, 2>> initial = {})
      : p01_(p01), p10_(p10) {
    if (!(p01 > 0.0 && p01 < 1.0 && p10 > 0.0 && p10 < 1.0)) {
      throw Error(ErrorCode::kConfiguration, "transition probabilities must lie in (0,1)");
    }
    initial_ = initial.value_or(stationary());
    if (!(initial_[0] >= 0.0 && initial_[1] >= 0.0) ||
        std::abs(initial_[0] + initial_[1] - 1.0) > 1e-12) {
      throw Error(ErrorCode::kConfiguration, "initial distribution must be a probability vector");
    }
  }

  double p01() const { return p01_; }
  double p10() const { return p10_; }
  const std::array<double, 2>& initial() const { return initial_; }

  // P(s_i = to | s_{i-1} = from).
  double operator()(int from, int to) const {
    if (from == 0) return to == 1 ? p01_ : 1.0 - p01_;
    return to == 0 ? p10_ : 1.0 - p10_;
  }

  // pi = pi P; pi_1 = p01 / (p01 + p10).
  std::array<double, 2> stationary() const {
    const double seizure = p01_ / (p01_ + p10_);
    return {1.0 - seizure, seizure};
  }

 private:
  double p01_;
  double p10_;
  std::array<double, 2> initial_;
};

// Normalized message; the true message equals values * exp(log_scale).
struct MessageVector {
  std::array<double, 2> values{};
  double log_scale = 0.0;
};

struct MarginalSeries {
  // P(s_k = 1 | y_1..N).
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

struct DetectorConfig {
  double threshold = 0.5;
};

namespace inference_detail {

inline void check_evidence(const Evidence& e, std::size_t index) {
  if (!(e[0] >= 0.0 && e[1] >= 0.0 && std::isfinite(e[0]) && std::isfinite(e[1]))) {
    throw Error(ErrorCode::kDomain,
                "evidence at block " + std::to_string(index) + " is negative or not finite");
  }
  if (e[0] == 0.0 && e[1] == 0.0) {
    throw Error(ErrorCode::kDegenerateEvidence,
                "evidence at block " + std::to_string(index) + " is zero for both states");
  }
}

// Scales `m` to sum 1 and returns log of the removed factor.
inline double normalize(std::array<double, 2>& m, std::size_t index) {
  const double total = m[0] + m[1];
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::kDegenerateEvidence,
                "message at block " + std::to_string(index) + " vanished");
  }
  m[0] /= total;
  m[1] /= total;
  return std::log(total);
}

}  // namespace inference_detail

// alpha_1(s) = pi(s) P(y_1|s);  alpha_i(s) = P(y_i|s) sum_s' P(s|s') alpha_{i-1}(s').
inline std::vector<MessageVector> forward_messages(std::span<const Evidence> evidence,
                                                   const TransitionModel& model) {
  if (evidence.empty()) throw Error(ErrorCode::kEmptySequence, "no evidence");
  std::vector<MessageVector> alpha(evidence.size());
  double log_scale = 0.0;
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    const Evidence& e = evidence[i];
    inference_detail::check_evidence(e, i);
    std::array<double, 2> m;
    if (i == 0) {
      m = {model.initial()[0] * e[0], model.initial()[1] * e[1]};
    } else {
      const auto& prev = alpha[i - 1].values;
      m = {e[0] * (model(0, 0) * prev[0] + model(1, 0) * prev[1]),
           e[1] * (model(0, 1) * prev[0] + model(1, 1) * prev[1])};
    }
    log_scale += inference_detail::normalize(m, i);
    alpha[i] = {m, log_scale};
  }
  return alpha;
}

// beta_N(s) = 1;  beta_i(s) = sum_s' P(s'|s) P(y_{i+1}|s') beta_{i+1}(s').
inline std::vector<MessageVector> backward_messages(std::span<const Evidence> evidence,
                                                    const TransitionModel& model) {
  if (evidence.empty()) throw Error(ErrorCode::kEmptySequence, "no evidence");
  const std::size_t n = evidence.size();
  for (std::size_t i = 0; i < n; ++i) inference_detail::check_evidence(evidence[i], i);
  std::vector<MessageVector> beta(n);
  std::array<double, 2> last{1.0, 1.0};
  const double last_norm = inference_detail::normalize(last, n - 1);
  beta[n - 1] = {last, last_norm};
  for (std::size_t i = n - 1; i-- > 0;) {
    const Evidence& e = evidence[i + 1];
    const auto& next = beta[i + 1].values;
    const double w0 = e[0] * next[0];
    const double w1 = e[1] * next[1];
    std::array<double, 2> m{model(0, 0) * w0 + model(0, 1) * w1,
                            model(1, 0) * w0 + model(1, 1) * w1};
    const double log_norm = inference_detail::normalize(m, i);
    beta[i] = {m, beta[i + 1].log_scale + log_norm};
  }
  return beta;
}

// Exact smoothed posteriors P(s_k = 1 | y) from the product of forward and
// backward messages.
inline MarginalSeries smooth_evidence(std::span<const Evidence> evidence,
                                      const TransitionModel& model) {
  const auto alpha = forward_messages(evidence, model);
  const auto beta = backward_messages(evidence, model);
  MarginalSeries out;
  out.values.resize(evidence.size());
  for (std::size_t k = 0; k < evidence.size(); ++k) {
    const double off = alpha[k].values[0] * beta[k].values[0];
    const double on = alpha[k].values[1] * beta[k].values[1];
    out.values[k] = on / (off + on);
  }
  return out;
}

inline std::vector<Evidence> evidence_series(std::span<const double> probabilities) {
  std::vector<Evidence> evidence;
  evidence.reserve(probabilities.size());
  for (double q : probabilities) evidence.push_back(evidence_from_probability(q));
  return evidence;
}

inline MarginalSeries smooth(std::span<const double> probabilities, const TransitionModel& model) {
  const auto evidence = evidence_series(probabilities);
  return smooth_evidence(evidence, model);
}

inline MarginalSeries smooth(const ProbabilitySeries& probabilities, const TransitionModel& model) {
  return smooth(std::span<const double>(probabilities.values), model);
}

// Approximate streaming smoother: the posterior of block k is released once
// block k + lag has arrived, using only the evidence up to that block.
// Blocks still pending at finish() get the exact tail posterior.
class FixedLagSmoother {
 public:
  static constexpr std::size_t kDefaultLag = 30;

  explicit FixedLagSmoother(TransitionModel model, std::size_t lag = kDefaultLag)
      : model_(model), lag_(lag) {}

  // Adds the next block's evidence; returns the posterior of block
  // (count - 1 - lag) when one becomes available.
  std::optional<double> push(const Evidence& e) {
    inference_detail::check_evidence(e, pushed_);
    std::array<double, 2> m;
    if (pushed_ == 0) {
      m = {model_.initial()[0] * e[0], model_.initial()[1] * e[1]};
    } else {
      m = {e[0] * (model_(0, 0) * last_alpha_[0] + model_(1, 0) * last_alpha_[1]),
           e[1] * (model_(0, 1) * last_alpha_[0] + model_(1, 1) * last_alpha_[1])};
    }
    inference_detail::normalize(m, pushed_);
    last_alpha_ = m;
    window_.push_back({e, m});
    ++pushed_;
    if (window_.size() <= lag_) return std::nullopt;
    const double posterior = posterior_of_front();
    window_.pop_front();
    return posterior;
  }

  std::optional<double> push_probability(double q) { return push(evidence_from_probability(q)); }

  // Posteriors of every block still held back, in order.
  std::vector<double> finish() {
    std::vector<double> out;
    while (!window_.empty()) {
      out.push_back(posterior_of_front());
      window_.pop_front();
    }
    return out;
  }

 private:
  struct Slot {
    Evidence evidence;
    std::array<double, 2> alpha;
  };

  double posterior_of_front() const {
    std::array<double, 2> beta{0.5, 0.5};
    for (std::size_t j = window_.size() - 1; j > 0; --j) {
      const Evidence& e = window_[j].evidence;
      const double w0 = e[0] * beta[0];
      const double w1 = e[1] * beta[1];
      beta = {model_(0, 0) * w0 + model_(0, 1) * w1, model_(1, 0) * w0 + model_(1, 1) * w1};
      inference_detail::normalize(beta, j);
    }
    const auto& alpha = window_.front().alpha;
    const double off = alpha[0] * beta[0];
    const double on = alpha[1] * beta[1];
    return on / (off + on);
  }

  TransitionModel model_;
  std::size_t lag_;
  std::deque<Slot> window_;
  std::array<double, 2> last_alpha_{};
  std::size_t pushed_ = 0;
};

inline MarginalSeries smooth_fixed_lag(std::span<const double> probabilities,
                                       const TransitionModel& model,
                                       std::size_t lag = FixedLagSmoother::kDefaultLag) {
  FixedLagSmoother smoother(model, lag);
  MarginalSeries out;
  for (double q : probabilities) {
    if (auto posterior = smoother.push_probability(q)) out.values.push_back(*posterior);
  }
  for (double posterior : smoother.finish()) out.values.push_back(posterior);
  return out;
}

// State 1 iff the posterior strictly exceeds the threshold.
inline std::vector<int> detect(const MarginalSeries& marginals, const DetectorConfig& config) {
  if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
    throw Error(ErrorCode::kConfiguration, "threshold must lie in [0,1]");
  }
  std::vector<int> states;
  states.reserve(marginals.size());
  for (double m : marginals.values) states.push_back(m > config.threshold ? 1 : 0);
  return states;
}

// Per block, the forward and the backward message each take 4
// multiplications and 2 additions for a binary first-order chain.
inline constexpr std::uint64_t kMessageMultiplications = 4;
inline constexpr std::uint64_t kMessageAdditions = 2;
inline constexpr std::uint64_t kMessagesPerBlock = 2;
inline constexpr std::uint64_t kFgFlopsPerBlock =
    kMessagesPerBlock * (kMessageMultiplications + kMessageAdditions);

inline std::uint64_t fg_flop_count(std::int64_t blocks) {
  if (blocks < 1) {
    throw Error(ErrorCode::kDomain, "block count must be at least 1, got " + std::to_string(blocks));
  }
  return kFgFlopsPerBlock * static_cast<std::uint64_t>(blocks);
}

}  // namespace seizure_fg
