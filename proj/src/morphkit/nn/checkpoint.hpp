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
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "morphkit/nn/tensor.hpp"

namespace morphkit::nn {

struct TensorRecord {
  std::string name;
  std::vector<size_t> shape;
  std::vector<float> data;
};

// Container layout: "MSKT", version byte 1, u32 little-endian header length,
// UTF-8 JSON header, then raw float32 little-endian tensor data in the order
// the header lists the tensors.
//
// The header object carries "hyperparameters", "tensors" ([{name, shape}])
// and any model metadata (vocabularies and the like) under "model".
struct Checkpoint {
  nlohmann::json hyperparameters = nlohmann::json::object();
  nlohmann::json model = nlohmann::json::object();
  std::vector<TensorRecord> tensors;

  const TensorRecord* find(std::string_view name) const;
};

std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(std::string_view bytes);
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Copies every parameter of store into records prefixed with prefix.
void export_parameters(const ParameterStore<float>& store, const std::string& prefix, Checkpoint& out);
// Restores parameter values from records; shapes must match exactly.
void import_parameters(ParameterStore<float>& store, const std::string& prefix, const Checkpoint& in);

}  // namespace morphkit::nn
