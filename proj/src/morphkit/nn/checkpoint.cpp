// Copyright 2026 The MorphKit Authors.
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
#include "morphkit/nn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace morphkit::nn {

namespace {

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint32_t get_u32(std::string_view bytes, size_t pos) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
  return v;
}

}  // namespace

const TensorRecord* Checkpoint::find(std::string_view name) const {
  for (const auto& t : tensors)
    if (t.name == name) return &t;
  return nullptr;
}

std::string serialize_checkpoint(const Checkpoint& checkpoint) {
  nlohmann::json header;
  header["hyperparameters"] = checkpoint.hyperparameters;
  header["model"] = checkpoint.model;
  header["tensors"] = nlohmann::json::array();
  for (const auto& t : checkpoint.tensors) {
    size_t n = 1;
    for (size_t d : t.shape) n *= d;
    if (n != t.data.size()) throw UsageError("tensor '" + t.name + "' data does not match its shape");
    header["tensors"].push_back({{"name", t.name}, {"shape", t.shape}});
  }
  const std::string text = header.dump();
  std::string out = "MSKT";
  out.push_back(1);
  put_u32(out, static_cast<uint32_t>(text.size()));
  out += text;
  for (const auto& t : checkpoint.tensors)
    for (float f : t.data) put_u32(out, std::bit_cast<uint32_t>(f));
  return out;
}

Checkpoint parse_checkpoint(std::string_view bytes) {
  if (bytes.size() < 9 || bytes.substr(0, 4) != "MSKT") throw DataError("checkpoint: bad magic");
  if (bytes[4] != 1) throw DataError("checkpoint: unsupported version");
  const uint32_t header_len = get_u32(bytes, 5);
  if (bytes.size() < 9 + static_cast<size_t>(header_len)) throw DataError("checkpoint: truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(9, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint: bad header: ") + e.what());
  }
  Checkpoint out;
  out.hyperparameters = header.value("hyperparameters", nlohmann::json::object());
  out.model = header.value("model", nlohmann::json::object());
  size_t pos = 9 + header_len;
  for (const auto& entry : header.at("tensors")) {
    TensorRecord t;
    t.name = entry.at("name").get<std::string>();
    t.shape = entry.at("shape").get<std::vector<size_t>>();
    size_t n = 1;
    for (size_t d : t.shape) n *= d;
    if (bytes.size() - pos < 4 * n) throw DataError("checkpoint: truncated data for '" + t.name + "'");
    t.data.resize(n);
    for (size_t i = 0; i < n; ++i, pos += 4) t.data[i] = std::bit_cast<float>(get_u32(bytes, pos));
    out.tensors.push_back(std::move(t));
  }
  if (pos != bytes.size()) throw DataError("checkpoint: trailing bytes");
  return out;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << serialize_checkpoint(checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_checkpoint(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": checkpoint header: " + e.what());
  }
}

void export_parameters(const ParameterStore<float>& store, const std::string& prefix, Checkpoint& out) {
  for (const auto* p : store.all()) {
    TensorRecord t;
    t.name = prefix + p->name;
    t.shape = {static_cast<size_t>(p->value.rows()), static_cast<size_t>(p->value.cols())};
    t.data.assign(p->value.data(), p->value.data() + p->value.size());
    out.tensors.push_back(std::move(t));
  }
}

void import_parameters(ParameterStore<float>& store, const std::string& prefix, const Checkpoint& in) {
  for (auto* p : store.all()) {
    const auto* t = in.find(prefix + p->name);
    if (!t) throw DataError("checkpoint lacks tensor '" + prefix + p->name + "'");
    if (t->shape.size() != 2 || t->shape[0] != static_cast<size_t>(p->value.rows()) ||
        t->shape[1] != static_cast<size_t>(p->value.cols()))
      throw DataError("checkpoint tensor '" + t->name + "' has the wrong shape");
    std::copy(t->data.begin(), t->data.end(), p->value.data());
  }
}

}  // namespace morphkit::nn
