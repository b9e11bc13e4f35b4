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
#include <vector>

namespace morphkit::tagger {

// Entry (h, d) scores head h for dependent d; index 0 is the artificial root.
using ArcScores = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Maximum arborescence rooted at 0 with exactly one root child. Returns the
// head of each token 1..n (so result[d - 1] is the head of d). The diagonal
// and column 0 are ignored. Non-finite scores raise UsageError.
std::vector<int> mst_decode(const ArcScores& scores);

}  // namespace morphkit::tagger
