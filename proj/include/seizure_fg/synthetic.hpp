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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "seizure_fg/inference.hpp"
#include "seizure_fg/likelihood.hpp"
#include "seizure_fg/preprocess.hpp"
#include "seizure_fg/signal_io.hpp"

// Seeded generators for fixtures: chains, noisy classifier outputs, random
// networks and small CHB-MIT style datasets. Everything derives from
// mt19937_64 bits directly so outputs are reproducible across standard
// libraries.
namespace seizure_fg::synthetic {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t bound) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(bound));
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Marsaglia-Tsang.
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

inline std::vector<int> sample_chain(std::size_t n, const TransitionModel& model, Rng& rng) {
  std::vector<int> states(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p_seizure = i == 0 ? model.initial()[1] : model(states[i - 1], 1);
    states[i] = rng.bernoulli(p_seizure) ? 1 : 0;
  }
  return states;
}

// Seizure blocks draw q ~ Beta(a, b), others q ~ Beta(b, a).
inline std::vector<double> beta_noise(const std::vector<int>& states, double a, double b, Rng& rng) {
  std::vector<double> q;
  q.reserve(states.size());
  for (int s : states) q.push_back(s ? rng.beta(a, b) : rng.beta(b, a));
  return q;
}

// He-style scaled random parameters.
inline Model random_model(const CnnArchitecture& arch, Rng& rng, double gain = 1.0) {
  Model model = Model::zeros(arch);
  for (auto& layer : model.layers) {
    if (layer.weight_dims.empty()) continue;
    const double fan_in = static_cast<double>(layer.weight.size() / layer.weight_dims.front());
    const double scale = gain * std::sqrt(2.0 / fan_in);
    for (float& w : layer.weight) w = static_cast<float>(scale * rng.normal());
    for (float& b : layer.bias) b = static_cast<float>(0.1 * rng.normal());
  }
  return model;
}

// Small fast architecture for pipeline fixtures.
inline CnnArchitecture tiny_architecture() {
  CnnArchitecture arch;
  arch.layers = {Conv1d{4, 33, 4, Activation::kRelu}, MaxPool{4},
                 Conv1d{4, 9, 1, Activation::kRelu}, GlobalPool{PoolKind::kAverage},
                 Dense{1, Activation::kSigmoid}};
  return arch;
}

// Montage-labelled recording: AR(1) background, 60 Hz mains and a
// high-amplitude 3 Hz rhythm inside each seizure.
inline Recording montage_recording(const std::string& patient_id, const std::string& file_id,
                                   int duration_s, const std::vector<SeizureAnnotation>& seizures,
                                   Rng& rng) {
  Recording rec;
  rec.patient_id = patient_id;
  rec.file_id = file_id;
  rec.sample_rate = kSampleRate;
  rec.duration_s = duration_s;
  const std::size_t n = static_cast<std::size_t>(duration_s) * kSampleRate;
  const MontageSpec montage = MontageSpec::standard();
  for (const auto& label : montage.pairs()) {
    Channel channel{label, std::vector<double>(n), std::nullopt};
    double state = 0.0;
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / kSampleRate;
      state = 0.95 * state + 6.0 * rng.normal();
      double v = state + 10.0 * std::sin(2.0 * std::numbers::pi * 60.0 * t + phase);
      for (const auto& s : seizures) {
        if (t >= s.start_s && t < s.end_s) {
          v += 120.0 * std::sin(2.0 * std::numbers::pi * 3.0 * t + phase);
        }
      }
      channel.samples[i] = v;
    }
    rec.channels.push_back(std::move(channel));
  }
  return rec;
}

struct FixtureFile {
  std::string file_id;
  int duration_s = 0;
  std::vector<SeizureAnnotation> seizures;
};

struct FixturePatient {
  std::string patient_id;
  std::vector<FixtureFile> files;
};

// Writes <root>/<patient>/<file>.edf and <root>/<patient>/<patient>-summary.txt.
inline void write_dataset(const std::filesystem::path& root,
                          const std::vector<FixturePatient>& patients, std::uint64_t seed) {
  Rng rng(seed);
  for (const auto& patient : patients) {
    const auto dir = root / patient.patient_id;
    std::filesystem::create_directories(dir);
    std::ofstream summary(dir / (patient.patient_id + "-summary.txt"));
    summary << "Data Sampling Rate: 256 Hz\n*************************\n\n";
    summary << "Channels in EDF Files:\n**********************\n";
    int index = 1;
    const MontageSpec montage = MontageSpec::standard();
    for (const auto& label : montage.pairs()) {
      summary << "Channel " << index++ << ": " << label << '\n';
    }
    for (const auto& file : patient.files) {
      write_edf(montage_recording(patient.patient_id, file.file_id, file.duration_s, file.seizures,
                                  rng),
                dir / (file.file_id + ".edf"));
      summary << "\nFile Name: " << file.file_id << ".edf\n";
      summary << "File Start Time: 10:00:00\nFile End Time: 11:00:00\n";
      summary << "Number of Seizures in File: " << file.seizures.size() << '\n';
      for (const auto& s : file.seizures) {
        summary << "Seizure Start Time: " << io::format_double(s.start_s) << " seconds\n";
        summary << "Seizure End Time: " << io::format_double(s.end_s) << " seconds\n";
      }
    }
  }
}

// Two patients, one seizure file each plus one seizure-free file.
inline std::vector<FixturePatient> two_patient_fixture() {
  return {
      {"chb01",
       {{"chb01_01", 60, {}}, {"chb01_03", 120, {{40.0, 50.0, "chb01_03"}}}}},
      {"chb02",
       {{"chb02_16", 100, {{70.0, 78.0, "chb02_16"}}}, {"chb02_17", 60, {}}}},
  };
}

}  // namespace seizure_fg::synthetic
