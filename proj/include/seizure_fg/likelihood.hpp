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

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"
#include "seizure_fg/error.hpp"
#include "seizure_fg/io.hpp"
#include "seizure_fg/preprocess.hpp"

namespace seizure_fg {

enum class Activation : std::uint32_t { kNone = 0, kRelu = 1, kSigmoid = 2, kSoftmax = 3, kTanh = 4 };
enum class PoolKind : std::uint32_t { kAverage = 0, kMax = 1 };

// Valid (unpadded) convolution along time, mixing all input channels.
struct Conv1d {
  std::size_t out_channels = 1;
  std::size_t kernel_size = 1;
  std::size_t stride = 1;
  Activation activation = Activation::kNone;
};

// Non-overlapping pooling window; a trailing partial window is dropped.
struct MaxPool {
  std::size_t width = 2;
};

struct GlobalPool {
  PoolKind kind = PoolKind::kAverage;
};

// Fully connected; a (time, channel) input is flattened time-major.
struct Dense {
  std::size_t out_units = 1;
  Activation activation = Activation::kNone;
};

// Identity at inference.
struct Dropout {
  float rate = 0.0f;
};

using Layer = std::variant<Conv1d, MaxPool, GlobalPool, Dense, Dropout>;

// Activation tensor shape. Vectors (after global pooling or a dense layer)
// have length 1 and is_vector set.
struct TensorShape {
  std::size_t length = 0;
  std::size_t channels = 0;
  bool is_vector = false;

  std::size_t size() const { return length * channels; }
  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

inline std::size_t conv_output_length(std::size_t input_length, std::size_t kernel,
                                      std::size_t stride) {
  if (input_length < kernel) return 0;
  return (input_length - kernel) / stride + 1;
}

struct CnnArchitecture {
  std::size_t input_length = kBlockSamples;
  std::size_t input_channels = kBlockChannels;
  std::vector<Layer> layers;

  TensorShape input_shape() const { return {input_length, input_channels, false}; }

  // Output shape of every layer, starting from `input`. Throws kShape naming
  // the first incompatible layer.
  std::vector<TensorShape> shapes_from(TensorShape input) const {
    std::vector<TensorShape> shapes;
    TensorShape shape = input;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::kShape, "layer " + std::to_string(i) + ": " + why);
      };
      std::visit(
          [&](const auto& layer) {
            using T = std::decay_t<decltype(layer)>;
            if constexpr (std::is_same_v<T, Conv1d>) {
              if (shape.is_vector) fail("conv1d after the time axis was pooled away");
              if (layer.kernel_size == 0 || layer.stride == 0 || layer.out_channels == 0) {
                fail("conv1d sizes must be positive");
              }
              const auto length = conv_output_length(shape.length, layer.kernel_size, layer.stride);
              if (length == 0) fail("kernel longer than input");
              shape = {length, layer.out_channels, false};
            } else if constexpr (std::is_same_v<T, MaxPool>) {
              if (shape.is_vector) fail("max_pool on a vector");
              if (layer.width == 0 || shape.length < layer.width) fail("pool wider than input");
              shape = {shape.length / layer.width, shape.channels, false};
            } else if constexpr (std::is_same_v<T, GlobalPool>) {
              if (shape.is_vector) fail("global_pool on a vector");
              shape = {1, shape.channels, true};
            } else if constexpr (std::is_same_v<T, Dense>) {
              if (layer.out_units == 0) fail("dense needs at least one unit");
              shape = {1, layer.out_units, true};
            } else {
              if (!(layer.rate >= 0.0f && layer.rate < 1.0f)) fail("dropout rate outside [0,1)");
            }
          },
          layers[i]);
      shapes.push_back(shape);
    }
    return shapes;
  }

  std::vector<TensorShape> shapes() const { return shapes_from(input_shape()); }

  // Checks layer chaining and that the network ends in a probability head:
  // dense(1, sigmoid) or dense(2, softmax).
  void validate() const {
    if (input_length == 0 || input_channels == 0) {
      throw Error(ErrorCode::kShape, "input shape must be positive");
    }
    if (layers.empty()) throw Error(ErrorCode::kShape, "architecture has no layers");
    shapes();
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const bool last = i + 1 == layers.size();
      Activation activation = Activation::kNone;
      if (const auto* conv = std::get_if<Conv1d>(&layers[i])) activation = conv->activation;
      if (const auto* dense = std::get_if<Dense>(&layers[i])) activation = dense->activation;
      if (!last && activation == Activation::kSoftmax) {
        throw Error(ErrorCode::kShape,
                    "layer " + std::to_string(i) + ": softmax is only allowed on the head");
      }
      if (last) {
        const auto* dense = std::get_if<Dense>(&layers[i]);
        const bool sigmoid_head = dense && dense->out_units == 1 &&
                                  dense->activation == Activation::kSigmoid;
        const bool softmax_head = dense && dense->out_units == 2 &&
                                  dense->activation == Activation::kSoftmax;
        if (!sigmoid_head && !softmax_head) {
          throw Error(ErrorCode::kShape, "layer " + std::to_string(i) +
                                             ": head must be dense(1, sigmoid) or "
                                             "dense(2, softmax)");
        }
      }
    }
  }

  // Input samples seen by one output position of the leading conv/pool
  // stack (stops at the first global pool or dense layer).
  std::size_t receptive_field() const {
    std::size_t field = 1;
    std::size_t jump = 1;
    for (const auto& layer : layers) {
      if (const auto* conv = std::get_if<Conv1d>(&layer)) {
        field += (conv->kernel_size - 1) * jump;
        jump *= conv->stride;
      } else if (const auto* pool = std::get_if<MaxPool>(&layer)) {
        field += (pool->width - 1) * jump;
        jump *= pool->width;
      } else if (std::holds_alternative<GlobalPool>(layer) ||
                 std::holds_alternative<Dense>(layer)) {
        break;
      }
    }
    return field;
  }

  // Shipped default stack; its receptive field exceeds one second at 256 Hz.
  static CnnArchitecture standard() {
    CnnArchitecture arch;
    arch.layers = {Conv1d{32, 129, 1, Activation::kRelu},
                   MaxPool{4},
                   Conv1d{32, 15, 1, Activation::kRelu},
                   MaxPool{4},
                   Conv1d{64, 7, 1, Activation::kRelu},
                   GlobalPool{PoolKind::kAverage},
                   Dense{32, Activation::kRelu},
                   Dense{1, Activation::kSigmoid}};
    return arch;
  }
};

// Parameters of one layer. Conv weights are (out, kernel, in) and dense
// weights are (out, in), both row-major. Parameter-free layers hold empty
// tensors.
struct LayerWeights {
  std::vector<std::size_t> weight_dims;
  std::vector<float> weight;
  std::vector<float> bias;
};

// Expected weight dims per layer (empty for parameter-free layers).
inline std::vector<std::vector<std::size_t>> expected_weight_dims(const CnnArchitecture& arch) {
  std::vector<std::vector<std::size_t>> dims;
  TensorShape shape = arch.input_shape();
  const auto shapes = arch.shapes();
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    if (const auto* conv = std::get_if<Conv1d>(&arch.layers[i])) {
      dims.push_back({conv->out_channels, conv->kernel_size, shape.channels});
    } else if (const auto* dense = std::get_if<Dense>(&arch.layers[i])) {
      dims.push_back({dense->out_units, shape.size()});
    } else {
      dims.emplace_back();
    }
    shape = shapes[i];
  }
  return dims;
}

inline std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

struct Model {
  CnnArchitecture architecture;
  std::vector<LayerWeights> layers;

  // Architecture validity plus tensor shapes; kShape names the layer.
  void validate() const {
    architecture.validate();
    if (layers.size() != architecture.layers.size()) {
      throw Error(ErrorCode::kShape, "weights for " + std::to_string(layers.size()) +
                                         " layers, architecture has " +
                                         std::to_string(architecture.layers.size()));
    }
    const auto dims = expected_weight_dims(architecture);
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const LayerWeights& w = layers[i];
      const std::size_t bias = dims[i].empty() ? 0 : dims[i].front();
      const bool ok = dims[i].empty()
                          ? w.weight.empty() && w.bias.empty()
                          : w.weight_dims == dims[i] && w.weight.size() == product(dims[i]) &&
                                w.bias.size() == bias;
      if (!ok) {
        throw Error(ErrorCode::kShape,
                    "layer " + std::to_string(i) + ": weight tensor shape does not match architecture");
      }
    }
  }

  std::size_t parameter_count() const {
    std::size_t total = 0;
    for (const auto& w : layers) total += w.weight.size() + w.bias.size();
    return total;
  }

  // All-zero parameters with the right shapes.
  static Model zeros(CnnArchitecture arch) {
    Model model{std::move(arch), {}};
    for (const auto& dims : expected_weight_dims(model.architecture)) {
      LayerWeights w;
      if (!dims.empty()) {
        w.weight_dims = dims;
        w.weight.assign(product(dims), 0.0f);
        w.bias.assign(dims.front(), 0.0f);
      }
      model.layers.push_back(std::move(w));
    }
    return model;
  }
};

namespace forward_detail {

inline float activate(Activation activation, float x) {
  switch (activation) {
    case Activation::kRelu: return x > 0.0f ? x : 0.0f;
    case Activation::kSigmoid: return 1.0f / (1.0f + std::exp(-x));
    case Activation::kTanh: return std::tanh(x);
    default: return x;
  }
}

inline void activate_all(Activation activation, std::vector<float>& values) {
  if (activation == Activation::kSoftmax) {
    const float peak = *std::max_element(values.begin(), values.end());
    float total = 0.0f;
    for (float& v : values) total += (v = std::exp(v - peak));
    for (float& v : values) v /= total;
    return;
  }
  if (activation == Activation::kNone) return;
  for (float& v : values) v = activate(activation, v);
}

}  // namespace forward_detail

// Seizure probability of one block, input laid out time-major
// (input_length x input_channels). Pure; safe to call concurrently on a
// shared model.
inline float forward(std::span<const float> block, const Model& model) {
  const CnnArchitecture& arch = model.architecture;
  if (block.size() != arch.input_length * arch.input_channels) {
    throw Error(ErrorCode::kShape, "block has " + std::to_string(block.size()) +
                                       " values, expected " +
                                       std::to_string(arch.input_length * arch.input_channels));
  }
  std::vector<float> current(block.begin(), block.end());
  std::vector<float> next;
  TensorShape shape = arch.input_shape();
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerWeights& w = model.layers[i];
    std::visit(
        [&](const auto& layer) {
          using T = std::decay_t<decltype(layer)>;
          if constexpr (std::is_same_v<T, Conv1d>) {
            const std::size_t in_channels = shape.channels;
            const std::size_t span = layer.kernel_size * in_channels;
            const std::size_t length =
                conv_output_length(shape.length, layer.kernel_size, layer.stride);
            next.assign(length * layer.out_channels, 0.0f);
            for (std::size_t t = 0; t < length; ++t) {
              // The receptive window of output t is contiguous in the
              // time-major input.
              const float* window = current.data() + t * layer.stride * in_channels;
              for (std::size_t o = 0; o < layer.out_channels; ++o) {
                const float* kernel = w.weight.data() + o * span;
                float acc = w.bias[o];
                for (std::size_t j = 0; j < span; ++j) acc += window[j] * kernel[j];
                next[t * layer.out_channels + o] = forward_detail::activate(layer.activation, acc);
              }
            }
            shape = {length, layer.out_channels, false};
          } else if constexpr (std::is_same_v<T, MaxPool>) {
            const std::size_t length = shape.length / layer.width;
            next.assign(length * shape.channels, 0.0f);
            for (std::size_t t = 0; t < length; ++t) {
              for (std::size_t c = 0; c < shape.channels; ++c) {
                float best = current[t * layer.width * shape.channels + c];
                for (std::size_t k = 1; k < layer.width; ++k) {
                  best = std::max(best, current[(t * layer.width + k) * shape.channels + c]);
                }
                next[t * shape.channels + c] = best;
              }
            }
            shape = {length, shape.channels, false};
          } else if constexpr (std::is_same_v<T, GlobalPool>) {
            next.assign(shape.channels, layer.kind == PoolKind::kMax ? -INFINITY : 0.0f);
            for (std::size_t t = 0; t < shape.length; ++t) {
              for (std::size_t c = 0; c < shape.channels; ++c) {
                const float v = current[t * shape.channels + c];
                next[c] = layer.kind == PoolKind::kMax ? std::max(next[c], v) : next[c] + v;
              }
            }
            if (layer.kind == PoolKind::kAverage) {
              for (float& v : next) v /= static_cast<float>(shape.length);
            }
            shape = {1, shape.channels, true};
          } else if constexpr (std::is_same_v<T, Dense>) {
            const std::size_t in = shape.size();
            next.assign(layer.out_units, 0.0f);
            for (std::size_t o = 0; o < layer.out_units; ++o) {
              const float* row = w.weight.data() + o * in;
              float acc = w.bias[o];
              for (std::size_t j = 0; j < in; ++j) acc += current[j] * row[j];
              next[o] = acc;
            }
            forward_detail::activate_all(layer.activation, next);
            shape = {1, layer.out_units, true};
          } else {
            next = current;
          }
        },
        arch.layers[i]);
    current.swap(next);
  }
  const float q = current.size() == 2 ? current[1] : current[0];
  return std::clamp(q, 0.0f, 1.0f);
}

// Weight file layout (all integers uint32 little-endian unless noted):
//   "SFGW" | version (1) | input_length | input_channels | layer_count
//   per layer: kind (1 conv1d, 2 max_pool, 3 global_pool, 4 dense, 5 dropout)
//     conv1d:      out_channels, kernel_size, stride, activation
//     max_pool:    width
//     global_pool: pool kind (0 average, 1 max)
//     dense:       out_units, activation
//     dropout:     rate (float32)
//   per conv1d/dense layer, in order: weight tensor then bias tensor, each
//     rank | dims[rank] | float32 values (row-major)
//   CRC-32 (zlib polynomial) of every preceding byte.
// Activation codes: 0 none, 1 relu, 2 sigmoid, 3 softmax, 4 tanh.
namespace weights_detail {

inline constexpr char kMagic[4] = {'S', 'F', 'G', 'W'};
inline constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u32(std::uint64_t value) {
    if (value > UINT32_MAX) throw Error(ErrorCode::kFormat, "value exceeds uint32");
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
  void f32(float value) {
    std::uint32_t bits;
    std::memcpy(&bits, &value, 4);
    u32(bits);
  }
  void tensor(const std::vector<std::size_t>& dims, const std::vector<float>& values) {
    u32(dims.size());
    for (auto d : dims) u32(d);
    for (float v : values) f32(v);
  }
  void raw(const char* data, std::size_t n) { bytes_.append(data, n); }
  std::string& bytes() { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  Reader(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

  std::uint32_t u32(const char* what) {
    if (pos_ + 4 > size_) {
      throw Error(ErrorCode::kTruncation, std::string("weight file ends while reading ") + what);
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32(const char* what) {
    const std::uint32_t bits = u32(what);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  std::size_t remaining() const { return size_ - pos_; }

 private:
  const unsigned char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

inline Activation activation_from(std::uint32_t code, std::size_t layer) {
  if (code > static_cast<std::uint32_t>(Activation::kTanh)) {
    throw Error(ErrorCode::kUnknownLayer,
                "layer " + std::to_string(layer) + ": unknown activation " + std::to_string(code));
  }
  return static_cast<Activation>(code);
}

inline std::uint32_t crc32_of(const void* data, std::size_t size) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, static_cast<const Bytef*>(data), static_cast<uInt>(size)));
}

}  // namespace weights_detail

inline std::string serialize_weights(const Model& model) {
  model.validate();
  weights_detail::Writer out;
  out.raw(weights_detail::kMagic, 4);
  out.u32(weights_detail::kVersion);
  const CnnArchitecture& arch = model.architecture;
  out.u32(arch.input_length);
  out.u32(arch.input_channels);
  out.u32(arch.layers.size());
  for (const auto& layer : arch.layers) {
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, Conv1d>) {
            out.u32(1);
            out.u32(l.out_channels);
            out.u32(l.kernel_size);
            out.u32(l.stride);
            out.u32(static_cast<std::uint32_t>(l.activation));
          } else if constexpr (std::is_same_v<T, MaxPool>) {
            out.u32(2);
            out.u32(l.width);
          } else if constexpr (std::is_same_v<T, GlobalPool>) {
            out.u32(3);
            out.u32(static_cast<std::uint32_t>(l.kind));
          } else if constexpr (std::is_same_v<T, Dense>) {
            out.u32(4);
            out.u32(l.out_units);
            out.u32(static_cast<std::uint32_t>(l.activation));
          } else {
            out.u32(5);
            out.f32(l.rate);
          }
        },
        layer);
  }
  for (const auto& w : model.layers) {
    if (w.weight_dims.empty()) continue;
    out.tensor(w.weight_dims, w.weight);
    out.tensor({w.bias.size()}, w.bias);
  }
  const std::uint32_t crc = weights_detail::crc32_of(out.bytes().data(), out.bytes().size());
  out.u32(crc);
  return std::move(out.bytes());
}

inline void save_weights(const std::filesystem::path& path, const Model& model) {
  const std::string bytes = serialize_weights(model);
  io::write_atomically(
      path, [&](std::ostream& out) { out.write(bytes.data(), static_cast<std::streamsize>(bytes.size())); },
      std::ios::out | std::ios::binary);
}

inline Model parse_weights(std::span<const unsigned char> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), weights_detail::kMagic, 4) != 0) {
    throw Error(ErrorCode::kFormat, "not a weight file (bad magic)");
  }
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) stored |= std::uint32_t{bytes[body + i]} << (8 * i);
  if (weights_detail::crc32_of(bytes.data(), body) != stored) {
    throw Error(ErrorCode::kChecksum, "weight file checksum mismatch");
  }

  weights_detail::Reader in(bytes.data() + 4, body - 4);
  if (const auto version = in.u32("version"); version != weights_detail::kVersion) {
    throw Error(ErrorCode::kFormat, "unsupported weight file version " + std::to_string(version));
  }
  Model model;
  CnnArchitecture& arch = model.architecture;
  arch.input_length = in.u32("input length");
  arch.input_channels = in.u32("input channels");
  const std::uint32_t count = in.u32("layer count");
  for (std::uint32_t i = 0; i < count; ++i) {
    switch (const std::uint32_t kind = in.u32("layer kind")) {
      case 1: {
        Conv1d conv;
        conv.out_channels = in.u32("conv out_channels");
        conv.kernel_size = in.u32("conv kernel_size");
        conv.stride = in.u32("conv stride");
        conv.activation = weights_detail::activation_from(in.u32("activation"), i);
        arch.layers.emplace_back(conv);
        break;
      }
      case 2: arch.layers.emplace_back(MaxPool{in.u32("pool width")}); break;
      case 3: {
        const auto pool = in.u32("pool kind");
        if (pool > 1) {
          throw Error(ErrorCode::kUnknownLayer,
                      "layer " + std::to_string(i) + ": unknown global pool kind");
        }
        arch.layers.emplace_back(GlobalPool{static_cast<PoolKind>(pool)});
        break;
      }
      case 4: {
        Dense dense;
        dense.out_units = in.u32("dense out_units");
        dense.activation = weights_detail::activation_from(in.u32("activation"), i);
        arch.layers.emplace_back(dense);
        break;
      }
      case 5: arch.layers.emplace_back(Dropout{in.f32("dropout rate")}); break;
      default:
        throw Error(ErrorCode::kUnknownLayer,
                    "layer " + std::to_string(i) + ": unknown layer kind " + std::to_string(kind));
    }
  }
  arch.validate();

  const auto expected = expected_weight_dims(arch);
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    LayerWeights w;
    if (!expected[i].empty()) {
      auto read_tensor = [&](std::vector<std::size_t>& dims, std::vector<float>& values,
                             const std::vector<std::size_t>& want) {
        const std::uint32_t rank = in.u32("tensor rank");
        if (rank > 8) {
          throw Error(ErrorCode::kShape, "layer " + std::to_string(i) + ": implausible tensor rank");
        }
        dims.resize(rank);
        for (auto& d : dims) d = in.u32("tensor dim");
        if (dims != want) {
          throw Error(ErrorCode::kShape,
                      "layer " + std::to_string(i) + ": tensor shape does not match architecture");
        }
        values.resize(product(dims));
        for (auto& v : values) v = in.f32("tensor values");
      };
      read_tensor(w.weight_dims, w.weight, expected[i]);
      std::vector<std::size_t> bias_dims;
      read_tensor(bias_dims, w.bias, {expected[i].front()});
    }
    model.layers.push_back(std::move(w));
  }
  if (in.remaining() != 0) throw Error(ErrorCode::kFormat, "trailing bytes after weight tensors");
  model.validate();
  return model;
}

inline Model load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  return parse_weights(bytes);
}

// JSON architecture descriptor, used for FLOP reports without weights:
// {"input_length":1024,"input_channels":18,"layers":[{"type":"conv1d",
//  "out_channels":32,"kernel_size":129,"stride":1,"activation":"relu"},...]}
inline Activation activation_from_name(const std::string& name) {
  static const std::map<std::string, Activation> names{
      {"none", Activation::kNone},       {"linear", Activation::kNone},
      {"relu", Activation::kRelu},       {"sigmoid", Activation::kSigmoid},
      {"softmax", Activation::kSoftmax}, {"tanh", Activation::kTanh}};
  auto it = names.find(name);
  if (it == names.end()) throw Error(ErrorCode::kUnknownLayer, "unknown activation '" + name + "'");
  return it->second;
}

inline std::string activation_name(Activation activation) {
  switch (activation) {
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kSoftmax: return "softmax";
    case Activation::kTanh: return "tanh";
    default: return "none";
  }
}

inline CnnArchitecture architecture_from_json(const nlohmann::json& j) {
  CnnArchitecture arch;
  try {
    arch.input_length = j.value("input_length", kBlockSamples);
    arch.input_channels = j.value("input_channels", kBlockChannels);
    for (const auto& layer : j.at("layers")) {
      const std::string type = layer.at("type");
      if (type == "conv1d") {
        arch.layers.emplace_back(Conv1d{layer.at("out_channels"), layer.at("kernel_size"),
                                        layer.value("stride", std::size_t{1}),
                                        activation_from_name(layer.value("activation", "none"))});
      } else if (type == "max_pool") {
        arch.layers.emplace_back(MaxPool{layer.at("width")});
      } else if (type == "global_pool") {
        const std::string kind = layer.value("kind", "average");
        if (kind != "average" && kind != "max") {
          throw Error(ErrorCode::kUnknownLayer, "unknown global pool kind '" + kind + "'");
        }
        arch.layers.emplace_back(GlobalPool{kind == "max" ? PoolKind::kMax : PoolKind::kAverage});
      } else if (type == "dense") {
        arch.layers.emplace_back(Dense{layer.at("out_units"),
                                       activation_from_name(layer.value("activation", "none"))});
      } else if (type == "dropout") {
        arch.layers.emplace_back(Dropout{layer.value("rate", 0.0f)});
      } else {
        throw Error(ErrorCode::kUnknownLayer, "unknown layer type '" + type + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("architecture descriptor: ") + e.what());
  }
  arch.validate();
  return arch;
}

inline nlohmann::json architecture_to_json(const CnnArchitecture& arch) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : arch.layers) {
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, Conv1d>) {
            layers.push_back({{"type", "conv1d"}, {"out_channels", l.out_channels},
                              {"kernel_size", l.kernel_size}, {"stride", l.stride},
                              {"activation", activation_name(l.activation)}});
          } else if constexpr (std::is_same_v<T, MaxPool>) {
            layers.push_back({{"type", "max_pool"}, {"width", l.width}});
          } else if constexpr (std::is_same_v<T, GlobalPool>) {
            layers.push_back({{"type", "global_pool"},
                              {"kind", l.kind == PoolKind::kMax ? "max" : "average"}});
          } else if constexpr (std::is_same_v<T, Dense>) {
            layers.push_back({{"type", "dense"}, {"out_units", l.out_units},
                              {"activation", activation_name(l.activation)}});
          } else {
            layers.push_back({{"type", "dropout"}, {"rate", l.rate}});
          }
        },
        layer);
  }
  return {{"input_length", arch.input_length},
          {"input_channels", arch.input_channels},
          {"layers", layers}};
}

// Identifies a block across the manifest, probability and marginal files.
struct BlockRef {
  std::string patient_id;
  std::string file_id;
  double start_s = 0.0;
};

struct ProbabilitySeries {
  std::vector<double> values;
  std::vector<BlockRef> blocks;

  std::size_t size() const { return values.size(); }
};

inline void write_probabilities(const std::filesystem::path& path,
                                const ProbabilitySeries& series) {
  io::write_atomically(path, [&](std::ostream& out) {
    out << "patient_id,file_id,start_s,probability\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      const BlockRef& b = series.blocks[i];
      out << b.patient_id << ',' << b.file_id << ',' << io::format_double(b.start_s) << ','
          << io::format_double(series.values[i]) << '\n';
    }
  });
}

// Reads a probability CSV and orders it like `manifest`, matching rows by
// (file_id, start_s).
inline ProbabilitySeries load_probabilities(const std::filesystem::path& path,
                                            const std::vector<BlockRecord>& manifest) {
  const auto rows =
      io::read_csv(path, {"patient_id", "file_id", "start_s", "probability"});
  std::map<std::pair<std::string, double>, double> by_key;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string context = "probability row " + std::to_string(i + 2);
    const double start = io::parse_double(rows[i][2], context);
    const double q = io::parse_double(rows[i][3], context);
    if (!(q >= 0.0 && q <= 1.0)) {
      throw Error(ErrorCode::kRange, context + ": probability " + rows[i][3] + " outside [0,1]");
    }
    if (!by_key.emplace(std::make_pair(rows[i][1], start), q).second) {
      throw Error(ErrorCode::kAlignment, context + ": duplicate block (" + rows[i][1] + ", " +
                                             rows[i][2] + ")");
    }
  }
  ProbabilitySeries series;
  for (const auto& record : manifest) {
    auto it = by_key.find({record.file_id, record.start_s});
    if (it == by_key.end()) {
      throw Error(ErrorCode::kAlignment, "missing probability for block (" + record.file_id +
                                             ", " + io::format_double(record.start_s) + ")");
    }
    series.values.push_back(it->second);
    series.blocks.push_back({record.patient_id, record.file_id, record.start_s});
    by_key.erase(it);
  }
  if (!by_key.empty()) {
    const auto& [key, q] = *by_key.begin();
    throw Error(ErrorCode::kAlignment, "probability for block (" + key.first + ", " +
                                           io::format_double(key.second) +
                                           ") is not in the manifest");
  }
  return series;
}

inline constexpr double kEvidenceFloor = 1e-12;

// Evidence pair (P(y|s=0), P(y|s=1)) taken directly from the classifier
// output, clamped away from 0 and 1.
inline std::array<double, 2> evidence_from_probability(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kDomain, "probability " + io::format_double(q) + " outside [0,1]");
  }
  const auto clamp = [](double v) { return std::clamp(v, kEvidenceFloor, 1.0 - kEvidenceFloor); };
  return {clamp(1.0 - q), clamp(q)};
}

}  // namespace seizure_fg
