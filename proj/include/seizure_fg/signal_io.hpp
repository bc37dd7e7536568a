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
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "seizure_fg/error.hpp"

namespace seizure_fg {

// Affine map between stored 16-bit integers and physical units (µV).
struct Calibration {
  double physical_min = -32768.0;
  double physical_max = 32767.0;
  int digital_min = -32768;
  int digital_max = 32767;
  std::string physical_dimension = "uV";

  double gain() const {
    return (physical_max - physical_min) /
           static_cast<double>(digital_max - digital_min);
  }
  double offset() const { return physical_min - gain() * digital_min; }

  double to_physical(int digital) const { return gain() * digital + offset(); }
  long long to_digital(double physical) const {
    return std::llround((physical - offset()) / gain());
  }
};

struct Channel {
  std::string label;
  std::vector<double> samples;
  // Present for channels read from EDF; write_edf derives one otherwise.
  std::optional<Calibration> calibration;
};

struct Recording {
  std::string patient_id;
  std::string file_id;
  int sample_rate = 256;
  std::vector<Channel> channels;
  double duration_s = 0.0;
  // Time of sample 0 relative to the start of the source file. Nonzero only
  // for trimmed segments.
  double origin_s = 0.0;

  std::size_t sample_count() const {
    return channels.empty() ? 0 : channels.front().samples.size();
  }

  // Throws kValidation if the invariants between rate, duration and channel
  // lengths do not hold.
  void validate() const {
    if (sample_rate <= 0) {
      throw Error(ErrorCode::kValidation, "sample_rate must be positive");
    }
    for (const auto& channel : channels) {
      if (channel.samples.size() != sample_count()) {
        throw Error(ErrorCode::kValidation,
                    "channel '" + channel.label + "' has " +
                        std::to_string(channel.samples.size()) +
                        " samples, expected " +
                        std::to_string(sample_count()));
      }
    }
    const double expected = duration_s * sample_rate;
    if (std::abs(expected - static_cast<double>(sample_count())) > 1e-6) {
      throw Error(ErrorCode::kValidation,
                  "duration_s * sample_rate does not match sample count");
    }
  }
};

struct SeizureAnnotation {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string file_id;

  double duration() const { return end_s - start_s; }
  friend bool operator==(const SeizureAnnotation&,
                         const SeizureAnnotation&) = default;
};

inline constexpr std::size_t kMontageSize = 18;

// Ordered bipolar channel pairs. Construction enforces 18 unique entries.
class MontageSpec {
 public:
  explicit MontageSpec(std::vector<std::string> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.size() != kMontageSize) {
      throw Error(ErrorCode::kConfiguration,
                  "montage must list exactly 18 channels, got " +
                      std::to_string(pairs_.size()));
    }
    std::set<std::string> seen;
    for (const auto& label : pairs_) {
      if (!seen.insert(normalize_label(label)).second) {
        throw Error(ErrorCode::kConfiguration,
                    "duplicate montage entry '" + label + "'");
      }
    }
  }

  // Montage listed for the CHB-MIT recordings.
  static MontageSpec standard() {
    return MontageSpec({"FP1-F7", "F7-T7", "T7-P7", "P7-O1", "FP1-F3",
                        "F3-T3", "T3-P3", "P3-O1", "FP2-F4", "F4-C4",
                        "C4-P4", "P4-O2", "FP2-F8", "F8-T8", "T8-P8",
                        "P8-O2", "FZ-CZ", "CZ-PZ"});
  }

  const std::vector<std::string>& pairs() const { return pairs_; }

  // Labels compare case-insensitively with surrounding whitespace removed.
  static std::string normalize_label(std::string_view label) {
    auto begin = label.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    auto end = label.find_last_not_of(" \t\r\n");
    std::string out(label.substr(begin, end - begin + 1));
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
      return static_cast<char>(std::toupper(c));
    });
    return out;
  }

 private:
  std::vector<std::string> pairs_;
};

namespace edf_detail {

inline constexpr std::size_t kFixedHeaderBytes = 256;
inline constexpr std::size_t kSignalHeaderBytes = 256;

inline std::string trim(std::string_view text) {
  auto begin = text.find_first_not_of(' ');
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(' ');
  return std::string(text.substr(begin, end - begin + 1));
}

// Reads a fixed-width ASCII field; `name` is used in error messages.
class HeaderReader {
 public:
  explicit HeaderReader(const std::vector<char>& bytes) : bytes_(bytes) {}

  std::string text(std::size_t offset, std::size_t width,
                   const std::string& name) const {
    if (offset + width > bytes_.size()) {
      throw Error(ErrorCode::kParse,
                  "header truncated while reading field '" + name + "'");
    }
    return trim(std::string_view(bytes_.data() + offset, width));
  }

  long long integer(std::size_t offset, std::size_t width,
                    const std::string& name) const {
    const std::string field = text(offset, width, name);
    long long value = 0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() ||
        ptr != field.data() + field.size()) {
      throw Error(ErrorCode::kParse, "field '" + name +
                                         "' is not an integer: '" + field +
                                         "'");
    }
    return value;
  }

  double real(std::size_t offset, std::size_t width,
              const std::string& name) const {
    const std::string field = text(offset, width, name);
    // from_chars for double is unavailable on some toolchains; strtod with a
    // full-consumption check is equivalent here.
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() ||
        !std::isfinite(value)) {
      throw Error(ErrorCode::kParse, "field '" + name +
                                         "' is not a number: '" + field + "'");
    }
    return value;
  }

 private:
  const std::vector<char>& bytes_;
};

inline std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return std::vector<char>(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
}

// Formats `value` into at most `width` characters, dropping precision as
// needed. Throws kFormat if even the integer part does not fit.
inline std::string format_number(double value, std::size_t width) {
  char buffer[64];
  for (int precision = 12; precision >= 1; --precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    std::string out(buffer);
    if (out.find('e') == std::string::npos && out.size() <= width) return out;
  }
  throw Error(ErrorCode::kFormat,
              "value " + std::to_string(value) + " does not fit EDF field");
}

inline void put_field(std::string& header, std::string_view value,
                      std::size_t width) {
  std::string field(value.substr(0, width));
  field.resize(width, ' ');
  header += field;
}

}  // namespace edf_detail

// Reads a plain EDF file. Samples are converted to physical units with each
// signal's calibration, which is kept on the channel.
inline Recording read_edf(const std::filesystem::path& path) {
  using namespace edf_detail;
  const std::vector<char> bytes = read_file(path);
  if (bytes.size() < kFixedHeaderBytes) {
    throw Error(ErrorCode::kParse, "file shorter than the 256-byte header");
  }
  HeaderReader header(bytes);
  header.text(0, 8, "version");
  Recording recording;
  const std::string patient = header.text(8, 80, "patient");
  recording.patient_id = patient.substr(0, patient.find(' '));
  recording.file_id = path.stem().string();

  const long long header_bytes = header.integer(184, 8, "header bytes");
  long long record_count = header.integer(236, 8, "number of data records");
  const double record_duration = header.real(244, 8, "data record duration");
  const long long signal_count = header.integer(252, 4, "number of signals");
  if (signal_count <= 0) {
    throw Error(ErrorCode::kParse, "field 'number of signals' must be positive");
  }
  if (header_bytes !=
      static_cast<long long>(kFixedHeaderBytes + kSignalHeaderBytes * signal_count)) {
    throw Error(ErrorCode::kParse,
                "field 'header bytes' is " + std::to_string(header_bytes) +
                    ", expected " +
                    std::to_string(kFixedHeaderBytes +
                                   kSignalHeaderBytes * signal_count));
  }
  if (record_duration <= 0.0) {
    throw Error(ErrorCode::kParse, "field 'data record duration' must be positive");
  }
  if (bytes.size() < static_cast<std::size_t>(header_bytes)) {
    throw Error(ErrorCode::kParse, "signal headers truncated");
  }

  const auto ns = static_cast<std::size_t>(signal_count);
  auto signal_field = [&](std::size_t column_offset, std::size_t width,
                          std::size_t index) {
    return kFixedHeaderBytes + column_offset * ns + width * index;
  };
  std::vector<int> samples_per_record(ns);
  recording.channels.resize(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const std::string suffix = " (signal " + std::to_string(i) + ")";
    Channel& channel = recording.channels[i];
    channel.label = header.text(signal_field(0, 16, i), 16, "label" + suffix);
    Calibration calibration;
    calibration.physical_dimension =
        header.text(signal_field(96, 8, i), 8, "physical dimension" + suffix);
    calibration.physical_min =
        header.real(signal_field(104, 8, i), 8, "physical minimum" + suffix);
    calibration.physical_max =
        header.real(signal_field(112, 8, i), 8, "physical maximum" + suffix);
    calibration.digital_min = static_cast<int>(
        header.integer(signal_field(120, 8, i), 8, "digital minimum" + suffix));
    calibration.digital_max = static_cast<int>(
        header.integer(signal_field(128, 8, i), 8, "digital maximum" + suffix));
    if (calibration.digital_min == calibration.digital_max) {
      throw Error(ErrorCode::kScaling, "digital minimum equals digital maximum" +
                                           suffix);
    }
    channel.calibration = calibration;
    const long long spr = header.integer(signal_field(216, 8, i), 8,
                                         "samples per data record" + suffix);
    if (spr <= 0) {
      throw Error(ErrorCode::kParse,
                  "field 'samples per data record" + suffix + "' must be positive");
    }
    samples_per_record[i] = static_cast<int>(spr);
  }
  if (std::adjacent_find(samples_per_record.begin(), samples_per_record.end(),
                         std::not_equal_to<>()) != samples_per_record.end()) {
    throw Error(ErrorCode::kFormat,
                "signals with differing sample rates are not supported");
  }
  const double rate = samples_per_record.front() / record_duration;
  recording.sample_rate = static_cast<int>(std::lround(rate));
  if (recording.sample_rate <= 0 ||
      std::abs(rate - recording.sample_rate) > 1e-6 * rate) {
    throw Error(ErrorCode::kParse, "non-integer sample rate " +
                                       std::to_string(rate) + " Hz");
  }

  const std::size_t record_bytes =
      2 * static_cast<std::size_t>(samples_per_record.front()) * ns;
  const std::size_t data_bytes = bytes.size() - static_cast<std::size_t>(header_bytes);
  if (record_count < 0) {
    record_count = static_cast<long long>(data_bytes / record_bytes);
    if (data_bytes % record_bytes != 0) {
      throw Error(ErrorCode::kTruncation,
                  "truncated data record at byte offset " +
                      std::to_string(header_bytes + record_count * record_bytes));
    }
  }
  for (long long r = 0; r < record_count; ++r) {
    const std::size_t begin = header_bytes + r * record_bytes;
    if (begin + record_bytes > bytes.size()) {
      throw Error(ErrorCode::kTruncation,
                  "truncated data record " + std::to_string(r) +
                      " at byte offset " + std::to_string(begin));
    }
  }

  const std::size_t spr = samples_per_record.front();
  for (auto& channel : recording.channels) {
    channel.samples.resize(spr * record_count);
  }
  const auto* data =
      reinterpret_cast<const unsigned char*>(bytes.data() + header_bytes);
  for (long long r = 0; r < record_count; ++r) {
    for (std::size_t i = 0; i < ns; ++i) {
      Channel& channel = recording.channels[i];
      const Calibration& calibration = *channel.calibration;
      const double gain = calibration.gain();
      const double offset = calibration.offset();
      const unsigned char* src = data + r * record_bytes + i * spr * 2;
      double* dst = channel.samples.data() + r * spr;
      for (std::size_t k = 0; k < spr; ++k) {
        const auto digital =
            static_cast<std::int16_t>(src[2 * k] | (src[2 * k + 1] << 8));
        dst[k] = gain * digital + offset;
      }
    }
  }
  recording.duration_s =
      static_cast<double>(spr * record_count) / recording.sample_rate;
  return recording;
}

// Writes `recording` as plain EDF. One-second data records are used when the
// sample count allows it; otherwise the file holds a single data record.
inline void write_edf(const Recording& recording,
                      const std::filesystem::path& path) {
  using namespace edf_detail;
  if (recording.channels.empty()) {
    throw Error(ErrorCode::kFormat, "recording has no channels");
  }
  recording.validate();
  const std::size_t n = recording.sample_count();
  if (n == 0) throw Error(ErrorCode::kFormat, "recording has no samples");

  std::vector<Calibration> calibrations;
  for (const auto& channel : recording.channels) {
    if (channel.calibration) {
      if (channel.calibration->digital_min == channel.calibration->digital_max) {
        throw Error(ErrorCode::kScaling,
                    "digital minimum equals digital maximum on '" +
                        channel.label + "'");
      }
      calibrations.push_back(*channel.calibration);
      continue;
    }
    auto [lo, hi] =
        std::minmax_element(channel.samples.begin(), channel.samples.end());
    Calibration derived;
    derived.physical_min = std::floor(*lo);
    derived.physical_max = std::ceil(*hi);
    if (derived.physical_max <= derived.physical_min) {
      derived.physical_max = derived.physical_min + 1.0;
    }
    calibrations.push_back(derived);
  }

  std::size_t samples_per_record = n;
  std::size_t record_count = 1;
  double record_duration = static_cast<double>(n) / recording.sample_rate;
  if (n % static_cast<std::size_t>(recording.sample_rate) == 0) {
    samples_per_record = static_cast<std::size_t>(recording.sample_rate);
    record_count = n / samples_per_record;
    record_duration = 1.0;
  }

  const std::size_t ns = recording.channels.size();
  std::string header;
  header.reserve(kFixedHeaderBytes + kSignalHeaderBytes * ns);
  put_field(header, "0", 8);
  put_field(header, recording.patient_id.empty() ? "X" : recording.patient_id, 80);
  put_field(header, "Startdate X X X X", 80);
  put_field(header, "01.01.00", 8);
  put_field(header, "00.00.00", 8);
  put_field(header, std::to_string(kFixedHeaderBytes + kSignalHeaderBytes * ns), 8);
  put_field(header, "", 44);
  put_field(header, std::to_string(record_count), 8);
  put_field(header, format_number(record_duration, 8), 8);
  put_field(header, std::to_string(ns), 4);

  auto each = [&](auto&& value_of, std::size_t width) {
    for (std::size_t i = 0; i < ns; ++i) put_field(header, value_of(i), width);
  };
  each([&](std::size_t i) { return recording.channels[i].label; }, 16);
  each([](std::size_t) { return std::string(); }, 80);
  each([&](std::size_t i) { return calibrations[i].physical_dimension; }, 8);
  each([&](std::size_t i) { return format_number(calibrations[i].physical_min, 8); }, 8);
  each([&](std::size_t i) { return format_number(calibrations[i].physical_max, 8); }, 8);
  each([&](std::size_t i) { return std::to_string(calibrations[i].digital_min); }, 8);
  each([&](std::size_t i) { return std::to_string(calibrations[i].digital_max); }, 8);
  each([](std::size_t) { return std::string(); }, 80);
  each([&](std::size_t) { return std::to_string(samples_per_record); }, 8);
  each([](std::size_t) { return std::string(); }, 32);

  // Digital values are computed against the calibration as it will be read
  // back, i.e. after the 8-character header formatting.
  std::vector<std::vector<std::int16_t>> digital(ns, std::vector<std::int16_t>(n));
  for (std::size_t i = 0; i < ns; ++i) {
    Calibration stored = calibrations[i];
    stored.physical_min = std::strtod(format_number(stored.physical_min, 8).c_str(), nullptr);
    stored.physical_max = std::strtod(format_number(stored.physical_max, 8).c_str(), nullptr);
    const auto& samples = recording.channels[i].samples;
    for (std::size_t k = 0; k < n; ++k) {
      const double value =
          std::round((samples[k] - stored.offset()) / stored.gain());
      if (!(value >= stored.digital_min && value <= stored.digital_max &&
            value >= INT16_MIN && value <= INT16_MAX)) {
        throw Error(ErrorCode::kRange,
                    "sample out of digital range on channel '" +
                        recording.channels[i].label + "' at index " +
                        std::to_string(k));
      }
      digital[i][k] = static_cast<std::int16_t>(value);
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  std::vector<char> record(2 * samples_per_record * ns);
  for (std::size_t r = 0; r < record_count; ++r) {
    char* dst = record.data();
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t k = 0; k < samples_per_record; ++k) {
        const auto value =
            static_cast<std::uint16_t>(digital[i][r * samples_per_record + k]);
        *dst++ = static_cast<char>(value & 0xff);
        *dst++ = static_cast<char>(value >> 8);
      }
    }
    out.write(record.data(), static_cast<std::streamsize>(record.size()));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

// One "File Name:" block of a CHB-MIT style summary file.
struct SummaryEntry {
  std::string file_id;
  int declared_seizures = 0;
  std::vector<SeizureAnnotation> seizures;
};

inline std::string file_id_from_name(std::string_view name) {
  return std::filesystem::path(edf_detail::trim(name)).stem().string();
}

// Parses every file block of a summary text, including files without
// seizures.
inline std::vector<SummaryEntry> parse_summary(std::istream& in) {
  static const std::regex kFileName(R"(^\s*File Name:\s*(\S+)\s*$)",
                                    std::regex::icase);
  static const std::regex kCount(
      R"(^\s*Number of Seizures in File:\s*(\d+)\s*$)", std::regex::icase);
  static const std::regex kStart(
      R"(^\s*Seizure\s*(?:\d+\s*)?Start Time:\s*([0-9]+(?:\.[0-9]*)?)\s*(?:seconds?)?\s*$)",
      std::regex::icase);
  static const std::regex kEnd(
      R"(^\s*Seizure\s*(?:\d+\s*)?End Time:\s*([0-9]+(?:\.[0-9]*)?)\s*(?:seconds?)?\s*$)",
      std::regex::icase);

  std::vector<SummaryEntry> entries;
  std::vector<std::optional<int>> declared;
  std::vector<double> starts;
  std::vector<double> ends;

  auto finish = [&]() {
    if (entries.empty()) return;
    SummaryEntry& entry = entries.back();
    if (starts.size() != ends.size()) {
      throw Error(ErrorCode::kConsistency,
                  entry.file_id + ": " + std::to_string(starts.size()) +
                      " seizure start times but " +
                      std::to_string(ends.size()) + " end times");
    }
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (starts[i] >= ends[i]) {
        throw Error(ErrorCode::kValidation,
                    entry.file_id + ": seizure " + std::to_string(i + 1) +
                        " starts at " + std::to_string(starts[i]) +
                        " s but ends at " + std::to_string(ends[i]) + " s");
      }
      entry.seizures.push_back({starts[i], ends[i], entry.file_id});
    }
    if (!declared.back()) {
      warn(entry.file_id + ": no seizure count declared");
      entry.declared_seizures = static_cast<int>(entry.seizures.size());
    } else {
      entry.declared_seizures = *declared.back();
    }
    if (entry.declared_seizures != static_cast<int>(entry.seizures.size())) {
      throw Error(ErrorCode::kConsistency,
                  entry.file_id + " declares " +
                      std::to_string(entry.declared_seizures) +
                      " seizures but lists " +
                      std::to_string(entry.seizures.size()));
    }
    starts.clear();
    ends.clear();
  };

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::smatch match;
    const bool in_entry = !entries.empty();
    if (std::regex_match(line, match, kFileName)) {
      finish();
      entries.push_back({file_id_from_name(match[1].str()), 0, {}});
      declared.emplace_back();
    } else if (std::regex_match(line, match, kCount)) {
      if (!in_entry) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_number) +
                                           ": seizure count outside a file block");
      }
      declared.back() = std::stoi(match[1].str());
    } else if (std::regex_match(line, match, kStart) ||
               std::regex_match(line, match, kEnd)) {
      if (!in_entry) {
        throw Error(ErrorCode::kParse, "line " + std::to_string(line_number) +
                                           ": seizure time outside a file block");
      }
      const bool is_start = std::regex_match(line, kStart);
      (is_start ? starts : ends).push_back(std::stod(match[1].str()));
    }
  }
  finish();
  return entries;
}

// Seizure intervals of every file declared in a summary file.
inline std::vector<SeizureAnnotation> parse_annotations(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::vector<SeizureAnnotation> out;
  for (const auto& entry : parse_summary(in)) {
    out.insert(out.end(), entry.seizures.begin(), entry.seizures.end());
  }
  return out;
}

// Selects (or derives) the montage channels, in montage order. A label not
// present verbatim is derived as left - right from referential channels.
inline Recording apply_montage(const Recording& recording,
                               const MontageSpec& spec) {
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < recording.channels.size(); ++i) {
    by_label[MontageSpec::normalize_label(recording.channels[i].label)]
        .push_back(i);
  }

  auto find = [&](const std::string& label) -> const Channel* {
    auto it = by_label.find(label);
    if (it == by_label.end()) return nullptr;
    const Channel& first = recording.channels[it->second.front()];
    for (std::size_t k = 1; k < it->second.size(); ++k) {
      if (recording.channels[it->second[k]].samples != first.samples) {
        throw Error(ErrorCode::kAmbiguity,
                    "channel '" + label +
                        "' appears more than once with different samples");
      }
    }
    if (it->second.size() > 1) {
      warn(recording.file_id + ": duplicate channel '" + label +
           "' with identical samples, using the first");
    }
    return &first;
  };

  Recording out;
  out.patient_id = recording.patient_id;
  out.file_id = recording.file_id;
  out.sample_rate = recording.sample_rate;
  out.duration_s = recording.duration_s;
  out.origin_s = recording.origin_s;
  out.channels.reserve(spec.pairs().size());
  for (const auto& label : spec.pairs()) {
    const std::string key = MontageSpec::normalize_label(label);
    if (const Channel* channel = find(key)) {
      out.channels.push_back({label, channel->samples, channel->calibration});
      continue;
    }
    const auto dash = key.find('-');
    const Channel* left = nullptr;
    const Channel* right = nullptr;
    if (dash != std::string::npos && key.find('-', dash + 1) == std::string::npos) {
      left = find(key.substr(0, dash));
      right = find(key.substr(dash + 1));
    }
    if (left == nullptr || right == nullptr) {
      throw Error(ErrorCode::kMissingChannel,
                  "cannot resolve montage channel \"" + label + "\"");
    }
    Channel derived{label, std::vector<double>(left->samples.size()), std::nullopt};
    std::transform(left->samples.begin(), left->samples.end(),
                   right->samples.begin(), derived.samples.begin(),
                   std::minus<>());
    out.channels.push_back(std::move(derived));
  }
  return out;
}

}  // namespace seizure_fg
