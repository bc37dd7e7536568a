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
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "seizure_fg/error.hpp"
#include "seizure_fg/io.hpp"
#include "seizure_fg/signal_io.hpp"

namespace seizure_fg {

inline constexpr int kSampleRate = 256;
inline constexpr int kWindowSeconds = 4;
inline constexpr int kStrideSeconds = 1;
inline constexpr std::size_t kBlockSamples = 1024;
inline constexpr std::size_t kBlockChannels = kMontageSize;

struct FilterSpec {
  double notch_freq = 60.0;
  double quality_factor = 30.0;
  double sample_rate = kSampleRate;

  void validate() const {
    if (!(sample_rate > 0.0)) {
      throw Error(ErrorCode::kConfiguration, "sample rate must be positive");
    }
    if (!(notch_freq > 0.0 && notch_freq < sample_rate / 2.0)) {
      throw Error(ErrorCode::kConfiguration,
                  "notch frequency must lie in (0, Nyquist)");
    }
    if (!(quality_factor > 0.0)) {
      throw Error(ErrorCode::kConfiguration, "quality factor must be positive");
    }
  }
};

// Normalized second-order section, a0 == 1.
struct Biquad {
  double b0, b1, b2, a1, a2;

  // Notch at spec.notch_freq with -3 dB bandwidth notch_freq / Q.
  static Biquad notch(const FilterSpec& spec) {
    spec.validate();
    const double w0 = 2.0 * std::numbers::pi * spec.notch_freq / spec.sample_rate;
    const double bandwidth = w0 / spec.quality_factor;
    const double g = 1.0 / (1.0 + std::tan(bandwidth / 2.0));
    const double c = -2.0 * std::cos(w0);
    return {g, g * c, g, g * c, 2.0 * g - 1.0};
  }

  // Transposed direct form II state giving a constant output for a constant
  // input of 1.
  std::pair<double, double> unit_step_state() const {
    const double z2 = b2 - a2;
    return {b1 - a1 + z2, z2};
  }

  void run(std::vector<double>& x) const {
    if (x.empty()) return;
    auto [z1, z2] = unit_step_state();
    z1 *= x.front();
    z2 *= x.front();
    for (double& v : x) {
      const double y = b0 * v + z1;
      z1 = b1 * v - a1 * y + z2;
      z2 = b2 * v - a2 * y;
      v = y;
    }
  }
};

// Zero-phase notch: the biquad runs forward then backward over an
// odd-reflected extension of the signal, each pass started in steady state.
inline std::vector<double> notch_filter(std::span<const double> signal,
                                        const FilterSpec& spec) {
  if (signal.empty()) throw Error(ErrorCode::kEmptySequence, "empty signal");
  const Biquad biquad = Biquad::notch(spec);
  const std::size_t n = signal.size();
  const double pole_radius = std::sqrt(biquad.a2);
  const auto settle = static_cast<std::size_t>(std::ceil(3.0 / (1.0 - pole_radius)));
  const std::size_t pad = std::min(n - 1, settle);

  std::vector<double> x;
  x.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) x.push_back(2.0 * signal[0] - signal[i]);
  x.insert(x.end(), signal.begin(), signal.end());
  for (std::size_t i = 1; i <= pad; ++i) {
    x.push_back(2.0 * signal[n - 1] - signal[n - 1 - i]);
  }

  biquad.run(x);
  std::reverse(x.begin(), x.end());
  biquad.run(x);
  std::reverse(x.begin(), x.end());
  return std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(pad),
                             x.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

inline Recording notch_filter(const Recording& recording, FilterSpec spec) {
  spec.sample_rate = recording.sample_rate;
  Recording out = recording;
  for (auto& channel : out.channels) {
    if (!channel.samples.empty()) channel.samples = notch_filter(channel.samples, spec);
    channel.calibration.reset();
  }
  return out;
}

// A contiguous piece of a recording kept around one or more seizures, with
// the annotations re-expressed relative to the piece.
struct TrimmedSegment {
  Recording recording;
  std::vector<SeizureAnnotation> annotations;
};

// Each seizure of duration d keeps 3d seconds on either side; overlapping
// windows merge and windows clip at the file bounds.
inline std::vector<TrimmedSegment> trim_around_seizures(
    const Recording& recording, const std::vector<SeizureAnnotation>& annotations) {
  if (annotations.empty()) {
    throw Error(ErrorCode::kValidation, recording.file_id + ": no seizures to trim around");
  }
  const double total = recording.duration_s;
  struct Window {
    double begin, end;
  };
  std::vector<Window> windows;
  for (const auto& seizure : annotations) {
    if (!(seizure.start_s >= 0.0 && seizure.end_s > seizure.start_s &&
          seizure.end_s <= total + 1e-9)) {
      throw Error(ErrorCode::kValidation,
                  recording.file_id + ": seizure [" + io::format_double(seizure.start_s) +
                      ", " + io::format_double(seizure.end_s) +
                      "] lies outside the recording of " + io::format_double(total) + " s");
    }
    const double d = seizure.duration();
    windows.push_back({std::max(0.0, seizure.start_s - 3.0 * d),
                       std::min(total, seizure.end_s + 3.0 * d)});
  }
  std::sort(windows.begin(), windows.end(),
            [](const Window& a, const Window& b) { return a.begin < b.begin; });
  std::vector<Window> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.begin <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, w.end);
    } else {
      merged.push_back(w);
    }
  }

  std::vector<TrimmedSegment> segments;
  const double rate = recording.sample_rate;
  for (const auto& w : merged) {
    const auto first = static_cast<std::size_t>(std::llround(w.begin * rate));
    const auto last = std::min(recording.sample_count(),
                               static_cast<std::size_t>(std::llround(w.end * rate)));
    TrimmedSegment segment;
    Recording& piece = segment.recording;
    piece.patient_id = recording.patient_id;
    piece.file_id = recording.file_id;
    piece.sample_rate = recording.sample_rate;
    piece.origin_s = recording.origin_s + static_cast<double>(first) / rate;
    piece.duration_s = static_cast<double>(last - first) / rate;
    for (const auto& channel : recording.channels) {
      piece.channels.push_back(
          {channel.label,
           std::vector<double>(channel.samples.begin() + static_cast<std::ptrdiff_t>(first),
                               channel.samples.begin() + static_cast<std::ptrdiff_t>(last)),
           channel.calibration});
    }
    const double local_zero = static_cast<double>(first) / rate;
    for (const auto& seizure : annotations) {
      if (seizure.start_s >= w.begin && seizure.end_s <= w.end) {
        segment.annotations.push_back(
            {seizure.start_s - local_zero, seizure.end_s - local_zero, seizure.file_id});
      }
    }
    segments.push_back(std::move(segment));
  }
  return segments;
}

// Number of full windows that fit in `sample_count` samples.
inline std::size_t block_count(std::size_t sample_count, std::size_t window_samples,
                               std::size_t stride_samples) {
  if (sample_count < window_samples) return 0;
  return (sample_count - window_samples) / stride_samples + 1;
}

// 1 iff the block overlaps the union of seizure intervals for at least half
// of its length.
inline int label_block(double start_s, double window_s,
                       std::span<const SeizureAnnotation> annotations) {
  const double end_s = start_s + window_s;
  std::vector<std::pair<double, double>> clipped;
  for (const auto& seizure : annotations) {
    const double a = std::max(start_s, seizure.start_s);
    const double b = std::min(end_s, seizure.end_s);
    if (b > a) clipped.emplace_back(a, b);
  }
  std::sort(clipped.begin(), clipped.end());
  double overlap = 0.0;
  double covered_to = start_s;
  for (const auto& [a, b] : clipped) {
    const double from = std::max(a, covered_to);
    if (b > from) {
      overlap += b - from;
      covered_to = b;
    }
  }
  return overlap >= window_s / 2.0 ? 1 : 0;
}

// One window of the montage, time-major: samples[t * channels + c].
struct EegBlock {
  std::vector<float> samples;
  double start_s = 0.0;
  int label = 0;
};

struct BlockSequence {
  std::vector<EegBlock> blocks;
  std::string patient_id;
  std::string file_id;
  double stride_s = kStrideSeconds;
};

// Cuts a montage recording into labeled windows. Block start times are in
// source-file time (the recording's origin is added).
inline BlockSequence segment(const Recording& recording,
                             const std::vector<SeizureAnnotation>& annotations,
                             int window_s = kWindowSeconds, int stride_s = kStrideSeconds) {
  if (recording.channels.size() != kBlockChannels) {
    throw Error(ErrorCode::kShape, recording.file_id + ": expected 18 channels, got " +
                                       std::to_string(recording.channels.size()));
  }
  if (recording.sample_rate != kSampleRate) {
    throw Error(ErrorCode::kValidation, recording.file_id + ": sample rate " +
                                            std::to_string(recording.sample_rate) +
                                            " Hz, expected 256 Hz");
  }
  if (window_s <= 0 || stride_s <= 0) {
    throw Error(ErrorCode::kConfiguration, "window and stride must be positive");
  }
  const auto window = static_cast<std::size_t>(window_s) * kSampleRate;
  const auto stride = static_cast<std::size_t>(stride_s) * kSampleRate;
  const std::size_t count = block_count(recording.sample_count(), window, stride);
  if (count == 0) {
    throw Error(ErrorCode::kEmptySequence,
                recording.file_id + ": " + io::format_double(recording.duration_s) +
                    " s is shorter than one " + std::to_string(window_s) + " s window");
  }

  BlockSequence sequence;
  sequence.patient_id = recording.patient_id;
  sequence.file_id = recording.file_id;
  sequence.stride_s = stride_s;
  sequence.blocks.reserve(count);
  const std::size_t channels = recording.channels.size();
  for (std::size_t k = 0; k < count; ++k) {
    EegBlock block;
    const double local_start = static_cast<double>(k * stride_s);
    block.start_s = recording.origin_s + local_start;
    block.label = label_block(local_start, window_s, annotations);
    block.samples.resize(window * channels);
    for (std::size_t c = 0; c < channels; ++c) {
      const double* src = recording.channels[c].samples.data() + k * stride;
      for (std::size_t t = 0; t < window; ++t) {
        block.samples[t * channels + c] = static_cast<float>(src[t]);
      }
    }
    sequence.blocks.push_back(std::move(block));
  }
  return sequence;
}

// Row of the block manifest. Row i describes tensor i of the block file.
struct BlockRecord {
  std::string patient_id;
  std::string file_id;
  double start_s = 0.0;
  int label = 0;
};

inline const std::vector<std::string>& manifest_header() {
  static const std::vector<std::string> header{"patient_id", "file_id", "start_s", "label"};
  return header;
}

inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<BlockRecord>& records) {
  io::write_atomically(path, [&](std::ostream& out) {
    out << "patient_id,file_id,start_s,label\n";
    for (const auto& r : records) {
      out << r.patient_id << ',' << r.file_id << ',' << io::format_double(r.start_s) << ','
          << r.label << '\n';
    }
  });
}

inline std::vector<BlockRecord> read_manifest(const std::filesystem::path& path) {
  std::vector<BlockRecord> records;
  std::size_t row = 1;
  for (const auto& fields : io::read_csv(path, manifest_header())) {
    ++row;
    const std::string context = "manifest row " + std::to_string(row);
    BlockRecord record{fields[0], fields[1], io::parse_double(fields[2], context), 0};
    if (fields[3] != "0" && fields[3] != "1") {
      throw Error(ErrorCode::kParse, context + ": label must be 0 or 1");
    }
    record.label = fields[3] == "1" ? 1 : 0;
    records.push_back(std::move(record));
  }
  return records;
}

// Block tensor file: a 40-byte header followed by float32 little-endian data.
//   0  char[4]  "SFGT"
//   4  uint32   version (1)
//   8  uint32   rank (3)
//  12  uint32   reserved (0)
//  16  uint64   block count
//  24  uint64   samples per block (time steps)
//  32  uint64   channels
namespace tensor_detail {

inline constexpr char kMagic[4] = {'S', 'F', 'G', 'T'};
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 40;

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= std::uint64_t{p[i]} << (8 * i);
  return static_cast<T>(value);
}

inline void put_floats(std::ostream& out, std::span<const float> values) {
  std::string bytes;
  bytes.reserve(values.size() * 4);
  for (float v : values) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_le(bytes, bits);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace tensor_detail

// Streams blocks into a tensor file; the count is patched on finish().
class BlockTensorWriter {
 public:
  BlockTensorWriter(std::filesystem::path path, std::size_t time_steps = kBlockSamples,
                    std::size_t channels = kBlockChannels)
      : path_(std::move(path)), time_steps_(time_steps), channels_(channels) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    tmp_ = path_;
    tmp_ += ".tmp";
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error(ErrorCode::kIo, "cannot write '" + tmp_.string() + "'");
    write_header();
  }

  void append(const EegBlock& block) {
    if (block.samples.size() != time_steps_ * channels_) {
      throw Error(ErrorCode::kShape, "block has " + std::to_string(block.samples.size()) +
                                         " values, expected " +
                                         std::to_string(time_steps_ * channels_));
    }
    tensor_detail::put_floats(out_, block.samples);
    ++count_;
  }

  std::size_t count() const { return count_; }

  void finish() {
    out_.seekp(0);
    write_header();
    out_.close();
    if (!out_) throw Error(ErrorCode::kIo, "write failed for '" + tmp_.string() + "'");
    std::filesystem::rename(tmp_, path_);
  }

 private:
  void write_header() {
    std::string header(tensor_detail::kMagic, 4);
    tensor_detail::put_le(header, tensor_detail::kVersion);
    tensor_detail::put_le(header, std::uint32_t{3});
    tensor_detail::put_le(header, std::uint32_t{0});
    tensor_detail::put_le(header, std::uint64_t{count_});
    tensor_detail::put_le(header, std::uint64_t{time_steps_});
    tensor_detail::put_le(header, std::uint64_t{channels_});
    out_.write(header.data(), static_cast<std::streamsize>(header.size()));
  }

  std::filesystem::path path_;
  std::filesystem::path tmp_;
  std::size_t time_steps_;
  std::size_t channels_;
  std::size_t count_ = 0;
  std::ofstream out_;
};

// Random access over a tensor file written by BlockTensorWriter.
class BlockTensorReader {
 public:
  explicit BlockTensorReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
    unsigned char header[tensor_detail::kHeaderBytes];
    in_.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in_ || std::memcmp(header, tensor_detail::kMagic, 4) != 0) {
      throw Error(ErrorCode::kFormat, path.string() + ": not a block tensor file");
    }
    using tensor_detail::get_le;
    if (get_le<std::uint32_t>(header + 4) != tensor_detail::kVersion ||
        get_le<std::uint32_t>(header + 8) != 3) {
      throw Error(ErrorCode::kFormat, path.string() + ": unsupported tensor version or rank");
    }
    count_ = get_le<std::uint64_t>(header + 16);
    time_steps_ = get_le<std::uint64_t>(header + 24);
    channels_ = get_le<std::uint64_t>(header + 32);
    in_.seekg(0, std::ios::end);
    const auto size = static_cast<std::uint64_t>(in_.tellg());
    if (size != tensor_detail::kHeaderBytes + count_ * time_steps_ * channels_ * 4) {
      throw Error(ErrorCode::kTruncation, path.string() + ": size does not match header dims");
    }
  }

  std::size_t count() const { return count_; }
  std::size_t time_steps() const { return time_steps_; }
  std::size_t channels() const { return channels_; }

  std::vector<float> read(std::size_t index) {
    if (index >= count_) throw Error(ErrorCode::kRange, "block index out of range");
    const std::size_t values = time_steps_ * channels_;
    std::vector<unsigned char> bytes(values * 4);
    in_.seekg(static_cast<std::streamoff>(tensor_detail::kHeaderBytes + index * values * 4));
    in_.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in_) throw Error(ErrorCode::kIo, "tensor read failed");
    std::vector<float> out(values);
    for (std::size_t i = 0; i < values; ++i) {
      const auto bits = tensor_detail::get_le<std::uint32_t>(bytes.data() + 4 * i);
      std::memcpy(&out[i], &bits, 4);
    }
    return out;
  }

 private:
  std::ifstream in_;
  std::size_t count_ = 0;
  std::size_t time_steps_ = 0;
  std::size_t channels_ = 0;
};

}  // namespace seizure_fg
