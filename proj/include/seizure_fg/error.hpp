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

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seizure_fg {

// Failure categories raised by the library. Each public operation documents
// which of these it can produce.
enum class ErrorCode {
  kIo,
  kParse,
  kScaling,
  kTruncation,
  kRange,
  kFormat,
  kValidation,
  kConsistency,
  kMissingChannel,
  kAmbiguity,
  kConfiguration,
  kEmptySequence,
  kShape,
  kChecksum,
  kUnknownLayer,
  kAlignment,
  kDegenerateEvidence,
  kDomain,
  kLengthMismatch,
  kUndefinedMetric,
  kPlan,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kScaling: return "scaling";
    case ErrorCode::kTruncation: return "truncation";
    case ErrorCode::kRange: return "range";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kConsistency: return "consistency";
    case ErrorCode::kMissingChannel: return "missing-channel";
    case ErrorCode::kAmbiguity: return "ambiguity";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kEmptySequence: return "empty-sequence";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kChecksum: return "checksum";
    case ErrorCode::kUnknownLayer: return "unknown-layer";
    case ErrorCode::kAlignment: return "alignment";
    case ErrorCode::kDegenerateEvidence: return "degenerate-evidence";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kUndefinedMetric: return "undefined-metric";
    case ErrorCode::kPlan: return "plan";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + " error: " +
                           message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Warnings go through a replaceable sink so tests and the CLI can capture
// them. The default writes to stderr.
using WarningSink = std::function<void(std::string_view)>;

inline WarningSink& warning_sink() {
  static WarningSink sink = [](std::string_view message) {
    std::cerr << "warning: " << message << '\n';
  };
  return sink;
}

inline void warn(std::string_view message) {
  if (warning_sink()) warning_sink()(message);
}

}  // namespace seizure_fg
