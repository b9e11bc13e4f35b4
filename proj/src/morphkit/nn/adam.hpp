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

#include <cmath>
#include <unordered_map>
#include <vector>

#include "morphkit/nn/tensor.hpp"

namespace morphkit::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-8;
  // Row-sparse parameters skip moment and value updates for rows whose
  // gradient is entirely zero in the current batch.
  bool lazy = true;
};

template <typename T>
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  const AdamConfig& config() const { return config_; }
  long step_count() const { return step_; }

  void step(const std::vector<Parameter<T>*>& params) {
    for (auto* p : params)
      if (!p->grad.allFinite()) throw NumericError("non-finite gradient in '" + p->name + "'");

    ++step_;
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
    const T b1 = static_cast<T>(config_.beta1), b2 = static_cast<T>(config_.beta2);
    const T lr = static_cast<T>(config_.learning_rate * std::sqrt(c2) / c1);
    // epsilon is applied to the bias-corrected second moment
    const T eps = static_cast<T>(config_.epsilon * std::sqrt(c2));

    for (auto* p : params) {
      auto& s = state_[p];
      if (s.m.size() == 0) {
        s.m = Matrix<T>::Zero(p->value.rows(), p->value.cols());
        s.v = Matrix<T>::Zero(p->value.rows(), p->value.cols());
      }
      const bool lazy = config_.lazy && p->row_sparse;
      for (Index r = 0; r < p->value.rows(); ++r) {
        auto g = p->grad.row(r);
        if (lazy && g.isZero(0)) continue;
        s.m.row(r) = b1 * s.m.row(r) + (T(1) - b1) * g;
        s.v.row(r) = b2 * s.v.row(r) + (T(1) - b2) * g.cwiseProduct(g);
        p->value.row(r).array() -= lr * s.m.row(r).array() / (s.v.row(r).array().sqrt() + eps);
      }
    }
  }

  const Matrix<T>* first_moment(const Parameter<T>* p) const {
    auto it = state_.find(p);
    return it == state_.end() ? nullptr : &it->second.m;
  }
  const Matrix<T>* second_moment(const Parameter<T>* p) const {
    auto it = state_.find(p);
    return it == state_.end() ? nullptr : &it->second.v;
  }

 private:
  struct Moments {
    Matrix<T> m;
    Matrix<T> v;
  };

  AdamConfig config_;
  long step_ = 0;
  std::unordered_map<const Parameter<T>*, Moments> state_;
};

// Rescales all gradients so their joint L2 norm is at most max_norm.
// Returns the norm before clipping.
template <typename T>
double clip_global_norm(const std::vector<Parameter<T>*>& params, double max_norm) {
  double sq = 0;
  for (auto* p : params) sq += static_cast<double>(p->grad.squaredNorm());
  const double norm = std::sqrt(sq);
  if (std::isfinite(norm) && norm > max_norm && max_norm > 0) {
    const T factor = static_cast<T>(max_norm / norm);
    for (auto* p : params) p->grad *= factor;
  }
  return norm;
}

}  // namespace morphkit::nn
