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

#include "seizure_fg/likelihood.hpp"

#include <gtest/gtest.h>
#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "forward_oracle.hpp"
#include "seizure_fg/synthetic.hpp"

namespace seizure_fg {
namespace {

namespace fs = std::filesystem;

// Little-endian byte builder for hand-made weight files.
class Bytes {
 public:
  Bytes& u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) data_.push_back(static_cast<unsigned char>(v >> (8 * i)));
    return *this;
  }
  Bytes& f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    return u32(bits);
  }
  Bytes& text(const char* s) {
    data_.insert(data_.end(), s, s + std::strlen(s));
    return *this;
  }
  Bytes& tensor(std::vector<std::uint32_t> dims, float fill) {
    u32(static_cast<std::uint32_t>(dims.size()));
    std::size_t n = 1;
    for (auto d : dims) {
      u32(d);
      n *= d;
    }
    for (std::size_t i = 0; i < n; ++i) f32(fill);
    return *this;
  }
  std::vector<unsigned char> sealed() const {
    auto out = data_;
    const auto crc = static_cast<std::uint32_t>(
        ::crc32(0L, data_.data(), static_cast<uInt>(data_.size())));
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(crc >> (8 * i)));
    return out;
  }

 private:
  std::vector<unsigned char> data_;
};

// conv1d(2, kernel 3) -> global average pool -> dense(1, sigmoid) on 18 channels.
Bytes small_file_header() {
  Bytes b;
  b.text("SFGW").u32(1).u32(1024).u32(18).u32(3);
  b.u32(1).u32(2).u32(3).u32(1).u32(1);
  b.u32(3).u32(0);
  b.u32(4).u32(1).u32(2);
  return b;
}

ErrorCode code_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(LoadWeightsTest, HandBuiltFileLoads) {
  Bytes b = small_file_header();
  b.tensor({2, 3, 18}, 0.25f).tensor({2}, 0.5f).tensor({1, 2}, -1.0f).tensor({1}, 0.0f);
  const fs::path path = fs::temp_directory_path() / "sfg_small.sfgw";
  const auto bytes = b.sealed();
  std::ofstream(path, std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  const Model model = load_weights(path);
  fs::remove(path);
  EXPECT_EQ(model.parameter_count(), (3u * 18 * 2 + 2) + (2u * 1 + 1));
  EXPECT_EQ(model.parameter_count(), 113u);
  ASSERT_EQ(model.layers.size(), 3u);
  EXPECT_EQ(model.layers[0].weight_dims, (std::vector<std::size_t>{2, 3, 18}));
  EXPECT_EQ(model.layers[0].bias, (std::vector<float>{0.5f, 0.5f}));
  EXPECT_EQ(model.layers[2].weight, (std::vector<float>{-1.0f, -1.0f}));
  EXPECT_EQ(serialize_weights(model),
            std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

TEST(LoadWeightsTest, CorruptedChecksum) {
  Bytes b = small_file_header();
  b.tensor({2, 3, 18}, 0.25f).tensor({2}, 0.5f).tensor({1, 2}, -1.0f).tensor({1}, 0.0f);
  auto bytes = b.sealed();
  bytes.back() ^= 0x01;
  EXPECT_EQ(code_of([&] { parse_weights(bytes); }), ErrorCode::kChecksum);
  bytes = b.sealed();
  bytes[100] ^= 0x40;
  EXPECT_EQ(code_of([&] { parse_weights(bytes); }), ErrorCode::kChecksum);
}

TEST(LoadWeightsTest, WrongDenseShapeNamesLayer) {
  Bytes b = small_file_header();
  b.tensor({2, 3, 18}, 0.25f).tensor({2}, 0.5f).tensor({1, 3}, -1.0f).tensor({1}, 0.0f);
  std::string message;
  EXPECT_EQ(code_of([&] { parse_weights(b.sealed()); }, &message), ErrorCode::kShape);
  EXPECT_NE(message.find("layer 2"), std::string::npos) << message;
}

TEST(LoadWeightsTest, UnknownLayerKindAndBadMagic) {
  Bytes b;
  b.text("SFGW").u32(1).u32(1024).u32(18).u32(1).u32(9);
  std::string message;
  EXPECT_EQ(code_of([&] { parse_weights(b.sealed()); }, &message), ErrorCode::kUnknownLayer);
  EXPECT_NE(message.find("layer 0"), std::string::npos) << message;

  Bytes bad;
  bad.text("SFGW").u32(1).u32(1024).u32(18).u32(1).u32(4).u32(1).u32(7);
  EXPECT_EQ(code_of([&] { parse_weights(bad.sealed()); }), ErrorCode::kUnknownLayer);

  Bytes magic;
  magic.text("XXXX").u32(1);
  EXPECT_EQ(code_of([&] { parse_weights(magic.sealed()); }), ErrorCode::kFormat);

  Bytes truncated = small_file_header();
  truncated.tensor({2, 3, 18}, 0.25f);
  EXPECT_NE(code_of([&] { parse_weights(truncated.sealed()); }), ErrorCode::kChecksum);
}

TEST(LoadWeightsTest, SaveLoadRoundTrip) {
  synthetic::Rng rng(21);
  const Model model = synthetic::random_model(CnnArchitecture::standard(), rng);
  const fs::path path = fs::temp_directory_path() / "sfg_rt.sfgw";
  save_weights(path, model);
  const Model back = load_weights(path);
  fs::remove(path);
  ASSERT_EQ(back.layers.size(), model.layers.size());
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    EXPECT_EQ(back.layers[i].weight, model.layers[i].weight);
    EXPECT_EQ(back.layers[i].bias, model.layers[i].bias);
  }
  EXPECT_EQ(architecture_to_json(back.architecture), architecture_to_json(model.architecture));
}

std::vector<float> random_block(const CnnArchitecture& arch, synthetic::Rng& rng, double scale = 1.0) {
  std::vector<float> block(arch.input_length * arch.input_channels);
  for (float& v : block) v = static_cast<float>(rng.normal() * scale);
  return block;
}

TEST(ForwardTest, ZeroWeightsGiveOneHalf) {
  const Model model = Model::zeros(CnnArchitecture::standard());
  synthetic::Rng rng(22);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(forward(random_block(model.architecture, rng, 100.0), model), 0.5f);
}

TEST(ForwardTest, UnitKernelReproducesFirstChannel) {
  CnnArchitecture arch;
  arch.input_length = 16;
  arch.layers = {Conv1d{1, 1, 1, Activation::kNone}, Dense{1, Activation::kSigmoid}};
  Model model = Model::zeros(arch);
  model.layers[0].weight[0] = 1.0f;  // e_1 over the 18 input channels
  synthetic::Rng rng(23);
  const auto block = random_block(arch, rng);
  for (std::size_t t = 0; t < 16; ++t) {
    std::fill(model.layers[1].weight.begin(), model.layers[1].weight.end(), 0.0f);
    model.layers[1].weight[t] = 1.0f;
    const float expected = 1.0f / (1.0f + std::exp(-block[t * 18]));
    EXPECT_NEAR(forward(block, model), expected, 1e-7) << t;
  }
}

TEST(ForwardTest, MatchesNaiveOracle) {
  synthetic::Rng rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const CnnArchitecture arch = oracle::random_small_architecture(rng);
    const Model model = synthetic::random_model(arch, rng);
    const auto block = random_block(arch, rng);
    EXPECT_NEAR(forward(block, model), oracle::forward(block, model), 1e-5)
        << architecture_to_json(arch).dump();
  }
}

TEST(ForwardTest, DefaultArchitectureMatchesOracle) {
  synthetic::Rng rng(25);
  const Model model = synthetic::random_model(CnnArchitecture::standard(), rng);
  const auto block = random_block(model.architecture, rng, 30.0);
  EXPECT_NEAR(forward(block, model), oracle::forward(block, model), 1e-5);
}

TEST(ForwardTest, DeterministicAndBounded) {
  synthetic::Rng rng(26);
  for (int trial = 0; trial < 30; ++trial) {
    const CnnArchitecture arch = oracle::random_small_architecture(rng);
    const Model model = synthetic::random_model(arch, rng, 1.0 + 20.0 * rng.uniform());
    const auto block = random_block(arch, rng, 1000.0);
    const float a = forward(block, model);
    const float b = forward(block, model);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
    EXPECT_GE(a, 0.0f);
    EXPECT_LE(a, 1.0f);
  }
}

TEST(ForwardTest, ShapeErrors) {
  const Model model = Model::zeros(CnnArchitecture::standard());
  EXPECT_EQ(code_of([&] { forward(std::vector<float>(1023 * 18), model); }), ErrorCode::kShape);
}

TEST(ArchitectureTest, ConvOutputLengthFormula) {
  synthetic::Rng rng(27);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t length = 1 + rng.index(300);
    const std::size_t kernel = 1 + rng.index(40);
    const std::size_t stride = 1 + rng.index(5);
    std::size_t expected = 0;
    for (std::size_t start = 0; start + kernel <= length; start += stride) ++expected;
    ASSERT_EQ(conv_output_length(length, kernel, stride), expected);
    if (expected == 0) continue;
    CnnArchitecture arch;
    arch.input_length = length;
    arch.input_channels = 2;
    arch.layers = {Conv1d{3, kernel, stride, Activation::kRelu}, Dense{1, Activation::kSigmoid}};
    EXPECT_EQ(arch.shapes()[0], (TensorShape{expected, 3, false}));
  }
}

TEST(ArchitectureTest, ValidationErrorsNameLayer) {
  CnnArchitecture arch;
  arch.input_length = 10;
  arch.layers = {Conv1d{2, 11, 1, Activation::kRelu}, Dense{1, Activation::kSigmoid}};
  std::string message;
  EXPECT_EQ(code_of([&] { arch.validate(); }, &message), ErrorCode::kShape);
  EXPECT_NE(message.find("layer 0"), std::string::npos);

  arch.layers = {GlobalPool{}, Conv1d{2, 1, 1, Activation::kNone}, Dense{1, Activation::kSigmoid}};
  EXPECT_EQ(code_of([&] { arch.validate(); }, &message), ErrorCode::kShape);
  EXPECT_NE(message.find("layer 1"), std::string::npos);

  arch.layers = {GlobalPool{}, Dense{3, Activation::kSoftmax}};
  EXPECT_THROW(arch.validate(), Error);
  arch.layers = {GlobalPool{}, Dense{1, Activation::kRelu}};
  EXPECT_THROW(arch.validate(), Error);
  arch.layers = {GlobalPool{}, Dense{2, Activation::kSoftmax}};
  EXPECT_NO_THROW(arch.validate());
}

TEST(ArchitectureTest, DefaultStackShapesAndReceptiveField) {
  const CnnArchitecture arch = CnnArchitecture::standard();
  EXPECT_NO_THROW(arch.validate());
  const auto shapes = arch.shapes();
  EXPECT_EQ(shapes[0], (TensorShape{896, 32, false}));
  EXPECT_EQ(shapes[1], (TensorShape{224, 32, false}));
  EXPECT_EQ(shapes[2], (TensorShape{210, 32, false}));
  EXPECT_EQ(shapes[3], (TensorShape{52, 32, false}));
  EXPECT_EQ(shapes[4], (TensorShape{46, 64, false}));
  EXPECT_EQ(shapes.back(), (TensorShape{1, 1, true}));
  // 1 + 128 + 3 + 14*4 + 3*4 + 6*16
  EXPECT_EQ(arch.receptive_field(), 296u);
  EXPECT_GE(arch.receptive_field(), 256u);
}

TEST(ArchitectureTest, JsonRoundTripAndErrors) {
  const auto j = architecture_to_json(CnnArchitecture::standard());
  const CnnArchitecture back = architecture_from_json(j);
  EXPECT_EQ(architecture_to_json(back), j);
  EXPECT_EQ(back.layers.size(), 8u);

  nlohmann::json bad = j;
  bad["layers"][0]["type"] = "lstm";
  EXPECT_EQ(code_of([&] { architecture_from_json(bad); }), ErrorCode::kUnknownLayer);
  bad = j;
  bad["layers"][0].erase("kernel_size");
  EXPECT_EQ(code_of([&] { architecture_from_json(bad); }), ErrorCode::kParse);
}

TEST(SoftmaxHeadTest, TwoUnitHeadReturnsPositiveClass) {
  CnnArchitecture arch;
  arch.input_length = 4;
  arch.input_channels = 1;
  arch.layers = {GlobalPool{PoolKind::kAverage}, Dense{2, Activation::kSoftmax}};
  Model model = Model::zeros(arch);
  model.layers[1].bias = {0.0f, 1.0f};
  const float q = forward(std::vector<float>{1, 2, 3, 4}, model);
  EXPECT_NEAR(q, std::exp(1.0) / (1.0 + std::exp(1.0)), 1e-6);
}

BlockRecord rec(const std::string& file, double start) { return {"chb01", file, start, 0}; }

class ProbabilityFileTest : public ::testing::Test {
 protected:
  void SetUp() override { path_ = fs::temp_directory_path() / "sfg_probs.csv"; }
  void TearDown() override { fs::remove(path_); }
  void write(const std::string& body) {
    std::ofstream(path_) << "patient_id,file_id,start_s,probability\n" << body;
  }
  fs::path path_;
};

TEST_F(ProbabilityFileTest, WellFormedFileAlignsToManifest) {
  write("chb01,a,2,0.3\nchb01,a,0,0.1\nchb01,a,1,0.2\n");
  const auto series = load_probabilities(path_, {rec("a", 0), rec("a", 1), rec("a", 2)});
  EXPECT_EQ(series.size(), 3u);
  EXPECT_EQ(series.values, (std::vector<double>{0.1, 0.2, 0.3}));
  EXPECT_EQ(series.blocks[2].start_s, 2.0);
}

TEST_F(ProbabilityFileTest, OutOfRangeNamesRow) {
  write("chb01,a,0,0.1\nchb01,a,1,1.2\n");
  std::string message;
  EXPECT_EQ(code_of([&] { load_probabilities(path_, {rec("a", 0), rec("a", 1)}); }, &message),
            ErrorCode::kRange);
  EXPECT_NE(message.find("row 3"), std::string::npos) << message;
}

TEST_F(ProbabilityFileTest, MissingBlockIsNamed) {
  std::string body;
  std::vector<BlockRecord> manifest;
  for (int i = 0; i < 7; ++i) {
    manifest.push_back(rec("chb01_03", i));
    if (i != 4) body += "chb01,chb01_03," + std::to_string(i) + ",0.5\n";
  }
  write(body);
  std::string message;
  EXPECT_EQ(code_of([&] { load_probabilities(path_, manifest); }, &message), ErrorCode::kAlignment);
  EXPECT_NE(message.find("(chb01_03, 4)"), std::string::npos) << message;
}

TEST_F(ProbabilityFileTest, DuplicateAndExtraRows) {
  write("chb01,a,0,0.1\nchb01,a,0,0.2\n");
  EXPECT_EQ(code_of([&] { load_probabilities(path_, {rec("a", 0)}); }), ErrorCode::kAlignment);
  write("chb01,a,0,0.1\nchb01,a,1,0.2\n");
  EXPECT_EQ(code_of([&] { load_probabilities(path_, {rec("a", 0)}); }), ErrorCode::kAlignment);
}

TEST_F(ProbabilityFileTest, WriteReadRoundTrip) {
  ProbabilitySeries series;
  series.values = {0.0, 1.0 / 3.0, 1.0};
  series.blocks = {{"p", "f", 0}, {"p", "f", 1}, {"p", "f", 2}};
  write_probabilities(path_, series);
  const auto back = load_probabilities(path_, {{"p", "f", 0, 0}, {"p", "f", 1, 0}, {"p", "f", 2, 0}});
  EXPECT_EQ(back.values, series.values);
}

TEST(EvidenceTest, Fixtures) {
  EXPECT_EQ(evidence_from_probability(0.5), (std::array<double, 2>{0.5, 0.5}));
  EXPECT_EQ(evidence_from_probability(1.0), (std::array<double, 2>{1e-12, 1.0 - 1e-12}));
  EXPECT_EQ(evidence_from_probability(0.0), (std::array<double, 2>{1.0 - 1e-12, 1e-12}));
  const auto e = evidence_from_probability(0.9);
  EXPECT_NEAR(e[0], 0.1, 1e-15);
  EXPECT_EQ(e[1], 0.9);
  EXPECT_THROW(evidence_from_probability(1.5), Error);
  EXPECT_THROW(evidence_from_probability(std::nan("")), Error);
}

TEST(EvidenceTest, ComponentsSumToOneInsideClamp) {
  synthetic::Rng rng(28);
  for (int i = 0; i < 1000; ++i) {
    const double q = rng.uniform(1e-6, 1.0 - 1e-6);
    const auto e = evidence_from_probability(q);
    ASSERT_NEAR(e[0] + e[1], 1.0, 1e-15);
  }
}

}  // namespace
}  // namespace seizure_fg
