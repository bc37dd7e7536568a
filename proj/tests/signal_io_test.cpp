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

#include "seizure_fg/signal_io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "edf_fixture.hpp"
#include "seizure_fg/synthetic.hpp"

namespace seizure_fg {
namespace {

namespace fs = std::filesystem;
using edf_fixture::build_edf;
using edf_fixture::FixtureSignal;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("sfg_signal_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

using edf_fixture::write_bytes;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(ReadEdfTest, AppliesAffineCalibration) {
  TempDir dir;
  const fs::path path = dir.path() / "one.edf";
  write_bytes(path, build_edf({{"FP1-F7", "-200", "200", "-2048", "2047", {0, 100, -100}}}, "1",
                              "1", 3));
  // 3 samples in a 1 s record read as a 3 Hz signal.
  const Recording rec = read_edf(path);
  ASSERT_EQ(rec.channels.size(), 1u);
  EXPECT_EQ(rec.channels[0].label, "FP1-F7");
  EXPECT_EQ(rec.sample_rate, 3);
  EXPECT_EQ(rec.patient_id, "patient-7");
  EXPECT_EQ(rec.file_id, "one");
  EXPECT_DOUBLE_EQ(rec.duration_s, 1.0);
  const double g = 400.0 / 4095.0;
  const double o = -200.0 + 2048.0 * g;
  ASSERT_EQ(rec.channels[0].samples.size(), 3u);
  EXPECT_NEAR(rec.channels[0].samples[0], o, 1e-12);
  EXPECT_NEAR(rec.channels[0].samples[1], 100.0 * g + o, 1e-12);
  EXPECT_NEAR(rec.channels[0].samples[2], -100.0 * g + o, 1e-12);
}

TEST(ReadEdfTest, MultipleRecordsAndSignalsKeepOrder) {
  TempDir dir;
  const fs::path path = dir.path() / "two.edf";
  write_bytes(path, build_edf({{"A", "-32768", "32767", "-32768", "32767", {1, 2, 3, 4}},
                               {"B", "-32768", "32767", "-32768", "32767", {-1, -2, -3, -4}}},
                              "2", "1", 2));
  const Recording rec = read_edf(path);
  EXPECT_EQ(rec.channels[0].samples, (std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(rec.channels[1].samples, (std::vector<double>{-1, -2, -3, -4}));
  EXPECT_EQ(rec.channels[1].label, "B");
  EXPECT_DOUBLE_EQ(rec.duration_s, 2.0);
}

TEST(ReadEdfTest, MalformedHeaders) {
  TempDir dir;
  const fs::path path = dir.path() / "bad.edf";
  const FixtureSignal ok{"A", "-1", "1", "-10", "10", {1, 2}};

  write_bytes(path, build_edf({{"A", "-1", "1", "5", "5", {1, 2}}}, "1", "1", 2));
  EXPECT_EQ(code_of([&] { read_edf(path); }), ErrorCode::kScaling);

  write_bytes(path, build_edf({{"A", "-1", "1", "abc", "10", {1, 2}}}, "1", "1", 2));
  try {
    read_edf(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("digital minimum"), std::string::npos) << e.what();
  }

  write_bytes(path, build_edf({ok}, "1", "1", 2, "999"));
  try {
    read_edf(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("header bytes"), std::string::npos) << e.what();
  }

  write_bytes(path, build_edf({ok}, "x1", "1", 2));
  EXPECT_EQ(code_of([&] { read_edf(path); }), ErrorCode::kParse);

  write_bytes(path, std::string(100, ' '));
  EXPECT_EQ(code_of([&] { read_edf(path); }), ErrorCode::kParse);
}

TEST(ReadEdfTest, TruncatedRecordReportsOffset) {
  TempDir dir;
  const fs::path path = dir.path() / "short.edf";
  std::string bytes = build_edf({{"A", "-1", "1", "-10", "10", {1, 2, 3, 4}}}, "2", "1", 2);
  bytes.resize(bytes.size() - 1);
  write_bytes(path, bytes);
  try {
    read_edf(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncation);
    // Record 1 starts after the 512-byte header and one 4-byte record.
    EXPECT_NE(std::string(e.what()).find("516"), std::string::npos) << e.what();
  }
}

TEST(WriteEdfTest, FileSizeForOneSecond) {
  TempDir dir;
  Recording rec;
  rec.sample_rate = 256;
  rec.duration_s = 1.0;
  rec.channels.push_back({"FP1-F7", std::vector<double>(256, 1.0), std::nullopt});
  const fs::path path = dir.path() / "size.edf";
  write_edf(rec, path);
  EXPECT_EQ(fs::file_size(path), 256u + 256u * 1 + 2u * 256);
}

TEST(WriteEdfTest, Errors) {
  TempDir dir;
  Recording empty;
  EXPECT_EQ(code_of([&] { write_edf(empty, dir.path() / "e.edf"); }), ErrorCode::kFormat);

  Recording rec;
  rec.sample_rate = 2;
  rec.duration_s = 1.0;
  Calibration narrow;
  narrow.physical_min = -10;
  narrow.physical_max = 10;
  narrow.digital_min = -100;
  narrow.digital_max = 100;
  rec.channels.push_back({"A", {0.0, 50.0}, narrow});
  try {
    write_edf(rec, dir.path() / "r.edf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
    EXPECT_NE(std::string(e.what()).find("'A' at index 1"), std::string::npos) << e.what();
  }
}

TEST(WriteEdfTest, RoundTripIsBitExactOnDigitalSamples) {
  TempDir dir;
  synthetic::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    Recording rec;
    rec.patient_id = "p" + std::to_string(trial);
    rec.sample_rate = 64 * static_cast<int>(1 + rng.index(4));
    const std::size_t n = static_cast<std::size_t>(rec.sample_rate) * (1 + rng.index(3)) +
                          (trial % 2 ? rng.index(16) : 0);
    rec.duration_s = static_cast<double>(n) / rec.sample_rate;
    std::vector<std::vector<int>> digital;
    for (int c = 0; c < 2; ++c) {
      Calibration cal;
      cal.digital_min = -32768 + static_cast<int>(rng.index(1000));
      cal.digital_max = 32767 - static_cast<int>(rng.index(1000));
      cal.physical_min = -std::round(rng.uniform(10, 5000));
      cal.physical_max = std::round(rng.uniform(10, 5000));
      Channel channel{"C" + std::to_string(c), {}, cal};
      digital.emplace_back();
      for (std::size_t k = 0; k < n; ++k) {
        const int d = cal.digital_min + static_cast<int>(rng.index(cal.digital_max - cal.digital_min + 1));
        digital.back().push_back(d);
        channel.samples.push_back(cal.to_physical(d));
      }
      rec.channels.push_back(std::move(channel));
    }
    const fs::path path = dir.path() / "rt.edf";
    write_edf(rec, path);
    const Recording back = read_edf(path);
    ASSERT_EQ(back.channels.size(), 2u);
    EXPECT_EQ(back.sample_rate, rec.sample_rate);
    for (int c = 0; c < 2; ++c) {
      const Calibration& cal = *back.channels[c].calibration;
      ASSERT_EQ(back.channels[c].samples.size(), n);
      for (std::size_t k = 0; k < n; ++k) {
        ASSERT_EQ(cal.to_digital(back.channels[c].samples[k]), digital[c][k]);
      }
    }
  }
}

TEST(ParseAnnotationsTest, SummaryGrammar) {
  std::istringstream in(
      "Data Sampling Rate: 256 Hz\n"
      "*************************\n\n"
      "File Name: chb01_02.edf\n"
      "File Start Time: 12:42:57\n"
      "File End Time: 13:42:57\n"
      "Number of Seizures in File: 0\n\n"
      "File Name: chb01_03.edf\n"
      "File Start Time: 13:43:04\n"
      "File End Time: 14:43:04\n"
      "Number of Seizures in File: 1\n"
      "Seizure Start Time: 2996 seconds\n"
      "Seizure End Time: 3036 seconds\n\n"
      "File Name: chb06_01.edf\n"
      "Number of Seizures in File: 2\n"
      "Seizure 1 Start Time: 1724 seconds\n"
      "Seizure 1 End Time: 1738 seconds\n"
      "Seizure 2 Start Time:  7461 seconds\r\n"
      "Seizure 2 End Time:  7476 seconds\r\n");
  const auto entries = parse_summary(in);
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_TRUE(entries[0].seizures.empty());
  ASSERT_EQ(entries[1].seizures.size(), 1u);
  EXPECT_EQ(entries[1].seizures[0], (SeizureAnnotation{2996, 3036, "chb01_03"}));
  ASSERT_EQ(entries[2].seizures.size(), 2u);
  EXPECT_EQ(entries[2].seizures[1], (SeizureAnnotation{7461, 7476, "chb06_01"}));
}

TEST(ParseAnnotationsTest, FileInterfaceAndErrors) {
  TempDir dir;
  const fs::path path = dir.path() / "chb01-summary.txt";
  std::ofstream(path) << "File Name: chb01_03.edf\nNumber of Seizures in File: 1\n"
                         "Seizure Start Time: 2996 seconds\nSeizure End Time: 3036 seconds\n"
                         "File Name: chb01_04.edf\nNumber of Seizures in File: 0\n";
  const auto annotations = parse_annotations(path);
  ASSERT_EQ(annotations.size(), 1u);
  EXPECT_EQ(annotations[0].start_s, 2996);
  EXPECT_EQ(annotations[0].end_s, 3036);
  EXPECT_EQ(annotations[0].file_id, "chb01_03");

  std::istringstream wrong_count(
      "File Name: a.edf\nNumber of Seizures in File: 2\n"
      "Seizure Start Time: 1 seconds\nSeizure End Time: 5 seconds\n");
  EXPECT_EQ(code_of([&] { parse_summary(wrong_count); }), ErrorCode::kConsistency);

  std::istringstream reversed(
      "File Name: a.edf\nNumber of Seizures in File: 1\n"
      "Seizure Start Time: 9 seconds\nSeizure End Time: 5 seconds\n");
  EXPECT_EQ(code_of([&] { parse_summary(reversed); }), ErrorCode::kValidation);
}

Recording referential(const std::vector<std::string>& labels, std::size_t n, synthetic::Rng& rng) {
  Recording rec;
  rec.file_id = "f";
  rec.sample_rate = 256;
  rec.duration_s = static_cast<double>(n) / 256;
  for (const auto& label : labels) {
    Channel c{label, std::vector<double>(n), std::nullopt};
    for (double& v : c.samples) v = rng.normal();
    rec.channels.push_back(std::move(c));
  }
  return rec;
}

TEST(ApplyMontageTest, SelectsAndReordersVerbatimLabels) {
  synthetic::Rng rng(1);
  auto labels = MontageSpec::standard().pairs();
  std::reverse(labels.begin(), labels.end());
  labels.push_back("ECG");
  const Recording rec = referential(labels, 32, rng);
  const Recording out = apply_montage(rec, MontageSpec::standard());
  ASSERT_EQ(out.channels.size(), 18u);
  for (std::size_t i = 0; i < 18; ++i) {
    EXPECT_EQ(out.channels[i].label, MontageSpec::standard().pairs()[i]);
    EXPECT_EQ(out.channels[i].samples, rec.channels[17 - i].samples);
  }
}

TEST(ApplyMontageTest, PermutationInvariant) {
  synthetic::Rng rng(2);
  auto labels = MontageSpec::standard().pairs();
  const Recording base = apply_montage(referential(labels, 16, rng), MontageSpec::standard());
  for (int trial = 0; trial < 10; ++trial) {
    Recording shuffled;
    shuffled.sample_rate = 256;
    shuffled.duration_s = base.duration_s;
    shuffled.channels = base.channels;
    for (std::size_t i = shuffled.channels.size() - 1; i > 0; --i) {
      std::swap(shuffled.channels[i], shuffled.channels[rng.index(i + 1)]);
    }
    const Recording out = apply_montage(shuffled, MontageSpec::standard());
    ASSERT_EQ(out.channels.size(), 18u);
    for (std::size_t i = 0; i < 18; ++i) EXPECT_EQ(out.channels[i].samples, base.channels[i].samples);
  }
}

TEST(ApplyMontageTest, DerivesBipolarFromReferential) {
  synthetic::Rng rng(3);
  std::vector<std::string> electrodes{"FP1", "F7", "T7", "P7", "O1", "F3", "T3", "P3", "FP2",
                                      "F4",  "C4", "P4", "O2", "F8", "T8", "P8", "FZ", "CZ", "PZ"};
  const Recording rec = referential(electrodes, 20, rng);
  const Recording out = apply_montage(rec, MontageSpec::standard());
  ASSERT_EQ(out.channels.size(), 18u);
  for (std::size_t k = 0; k < 20; ++k) {
    EXPECT_EQ(out.channels[0].samples[k], rec.channels[0].samples[k] - rec.channels[1].samples[k]);
  }
}

TEST(ApplyMontageTest, LabelsMatchCaseInsensitivelyAndTrimmed) {
  synthetic::Rng rng(4);
  const MontageSpec spec = MontageSpec::standard();
  std::vector<std::string> labels;
  for (const auto& l : spec.pairs()) {
    std::string lower = l;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    labels.push_back(" " + lower + "  ");
  }
  EXPECT_EQ(apply_montage(referential(labels, 4, rng), spec).channels.size(), 18u);
}

TEST(ApplyMontageTest, MissingChannelNamesLabel) {
  synthetic::Rng rng(5);
  auto labels = MontageSpec::standard().pairs();
  labels.erase(std::find(labels.begin(), labels.end(), "T8-P8"));
  try {
    apply_montage(referential(labels, 4, rng), MontageSpec::standard());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingChannel);
    EXPECT_NE(std::string(e.what()).find("\"T8-P8\""), std::string::npos);
  }
}

TEST(ApplyMontageTest, DuplicateLabels) {
  synthetic::Rng rng(6);
  Recording rec = referential(MontageSpec::standard().pairs(), 8, rng);
  rec.channels.push_back(rec.channels[14]);  // identical T8-P8
  std::vector<std::string> warnings;
  auto saved = warning_sink();
  warning_sink() = [&](std::string_view w) { warnings.emplace_back(w); };
  const Recording out = apply_montage(rec, MontageSpec::standard());
  warning_sink() = saved;
  EXPECT_EQ(out.channels[14].samples, rec.channels[14].samples);
  EXPECT_EQ(warnings.size(), 1u);

  rec.channels.back().samples[0] += 1.0;
  EXPECT_EQ(code_of([&] { apply_montage(rec, MontageSpec::standard()); }), ErrorCode::kAmbiguity);
}

TEST(MontageSpecTest, Validation) {
  EXPECT_EQ(MontageSpec::standard().pairs().size(), 18u);
  EXPECT_EQ(MontageSpec::standard().pairs().front(), "FP1-F7");
  EXPECT_EQ(MontageSpec::standard().pairs().back(), "CZ-PZ");
  EXPECT_THROW(MontageSpec({"A-B"}), Error);
  auto pairs = MontageSpec::standard().pairs();
  pairs[1] = "fp1-f7";
  EXPECT_THROW(MontageSpec{pairs}, Error);
}

}  // namespace
}  // namespace seizure_fg
