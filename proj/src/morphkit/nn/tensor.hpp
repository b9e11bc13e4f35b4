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

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "morphkit/common/error.hpp"
#include "morphkit/common/rng.hpp"

namespace morphkit::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Index = Eigen::Index;

template <typename T>
struct Parameter {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;
  // Embedding tables: rows are independent, so lazy Adam may skip rows that
  // received no gradient in the current batch.
  bool row_sparse = false;
};

enum class Init { zeros, ones, uniform_embedding, glorot };

// Owns the parameters of one model, in creation order.
template <typename T>
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;
  ParameterStore(ParameterStore&&) = default;
  ParameterStore& operator=(ParameterStore&&) = default;

  Parameter<T>& add(const std::string& name, Index rows, Index cols, Init init, Rng& rng,
                    bool row_sparse = false) {
    if (rows <= 0 || cols <= 0) throw UsageError("parameter '" + name + "' needs a positive shape");
    if (by_name_.count(name)) throw UsageError("duplicate parameter '" + name + "'");
    auto p = std::make_unique<Parameter<T>>();
    p->name = name;
    p->row_sparse = row_sparse;
    p->value.resize(rows, cols);
    p->grad = Matrix<T>::Zero(rows, cols);
    switch (init) {
      case Init::zeros:
        p->value.setZero();
        break;
      case Init::ones:
        p->value.setOnes();
        break;
      case Init::uniform_embedding:
        for (Index i = 0; i < p->value.size(); ++i) p->value.data()[i] = static_cast<T>(rng.uniform(-0.1, 0.1));
        break;
      case Init::glorot: {
        const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
        for (Index i = 0; i < p->value.size(); ++i)
          p->value.data()[i] = static_cast<T>(rng.uniform(-limit, limit));
        break;
      }
    }
    by_name_[name] = p.get();
    params_.push_back(std::move(p));
    return *params_.back();
  }

  Parameter<T>* find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
  }

  Parameter<T>& get(const std::string& name) const {
    auto* p = find(name);
    if (!p) throw DataError("missing parameter '" + name + "'");
    return *p;
  }

  std::vector<Parameter<T>*> all() const {
    std::vector<Parameter<T>*> out;
    for (const auto& p : params_) out.push_back(p.get());
    return out;
  }

  size_t size() const { return params_.size(); }

  size_t element_count() const {
    size_t n = 0;
    for (const auto& p : params_) n += static_cast<size_t>(p->value.size());
    return n;
  }

  void zero_grad() {
    for (auto& p : params_) p->grad.setZero();
  }

 private:
  std::vector<std::unique_ptr<Parameter<T>>> params_;
  std::map<std::string, Parameter<T>*> by_name_;
};

}  // namespace morphkit::nn
