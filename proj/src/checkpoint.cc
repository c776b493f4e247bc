// Copyright 2026 The Domex Authors.
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

#include "domex/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <map>

#include "domex/errors.h"

namespace domex {

namespace {

template <typename T>
void PutLe(std::string *out, T value) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out->push_back(static_cast<char>((static_cast<uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T Le() {
    Need(sizeof(T));
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string_view Bytes(size_t n) {
    Need(n);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void Need(size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorKind::kBadFormat, "checkpoint is truncated");
  }

  std::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace

std::string EncodeCheckpoint(const nlohmann::json &metadata, const nn::ParameterSet &params) {
  std::string out(kCheckpointMagic);
  const std::string meta = metadata.dump();
  PutLe<uint64_t>(&out, meta.size());
  out += meta;
  PutLe<uint32_t>(&out, static_cast<uint32_t>(params.size()));
  for (const nn::Parameter &p : params.params()) {
    PutLe<uint32_t>(&out, static_cast<uint32_t>(p.name.size()));
    out += p.name;
    PutLe<uint32_t>(&out, static_cast<uint32_t>(p.value.ndim()));
    for (int d : p.value.shape()) PutLe<uint32_t>(&out, static_cast<uint32_t>(d));
    for (double v : p.value.values()) {
      PutLe<uint32_t>(&out, std::bit_cast<uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

Checkpoint DecodeCheckpoint(std::string_view bytes) {
  if (bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic) {
    throw Error(ErrorKind::kBadFormat, "not a DOMEX-CKPT-1 checkpoint");
  }
  Reader r(bytes.substr(kCheckpointMagic.size()));
  Checkpoint ckpt;
  const uint64_t meta_len = r.Le<uint64_t>();
  try {
    ckpt.metadata = nlohmann::json::parse(r.Bytes(meta_len));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kBadFormat, std::string("checkpoint metadata: ") + e.what());
  }
  const uint32_t count = r.Le<uint32_t>();
  for (uint32_t i = 0; i < count; ++i) {
    std::string name(r.Bytes(r.Le<uint32_t>()));
    const uint32_t ndim = r.Le<uint32_t>();
    std::vector<int> shape;
    for (uint32_t k = 0; k < ndim; ++k) shape.push_back(static_cast<int>(r.Le<uint32_t>()));
    nn::Tensor t(shape);
    for (double &v : t.values()) v = std::bit_cast<float>(r.Le<uint32_t>());
    ckpt.tensors.emplace_back(std::move(name), std::move(t));
  }
  if (!r.done()) throw Error(ErrorKind::kBadFormat, "trailing bytes after checkpoint");
  return ckpt;
}

void RestoreParameters(const Checkpoint &ckpt, nn::ParameterSet *params) {
  std::map<std::string, const nn::Tensor *> by_name;
  for (const auto &[name, t] : ckpt.tensors) by_name[name] = &t;
  for (nn::Parameter &p : params->params()) {
    auto it = by_name.find(p.name);
    if (it == by_name.end()) throw Error(ErrorKind::kBadFormat, "checkpoint lacks " + p.name);
    if (it->second->shape() != p.value.shape()) {
      throw Error(ErrorKind::kBadFormat, "shape of " + p.name + " is " +
                                             nn::ShapeString(it->second->shape()) + ", expected " +
                                             nn::ShapeString(p.value.shape()));
    }
    p.value = *it->second;
    p.grad.Fill(0.0);
  }
}

}  // namespace domex
