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
#include "morphkit/tagger/mst.hpp"

#include <cmath>
#include <limits>

#include "morphkit/common/error.hpp"

namespace morphkit::tagger {

namespace {

constexpr double kMissing = -std::numeric_limits<double>::infinity();

std::vector<int> find_cycle(const std::vector<int>& head) {
  const size_t n = head.size();
  std::vector<int> state(n, 0);  // 0 unvisited, 1 on current path, 2 done
  for (size_t start = 1; start < n; ++start) {
    if (state[start]) continue;
    std::vector<int> path;
    int v = static_cast<int>(start);
    while (v > 0 && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = head[v];
    }
    if (v > 0 && state[v] == 1) {
      std::vector<int> cycle;
      int u = v;
      do {
        cycle.push_back(u);
        u = head[u];
      } while (u != v);
      return cycle;
    }
    for (int p : path) state[p] = 2;
  }
  return {};
}

// Chu-Liu/Edmonds over nodes 0..n-1; kMissing marks absent edges. Node 0
// is the root and every other node has at least one incoming edge.
std::vector<int> edmonds(const ArcScores& s) {
  const int n = static_cast<int>(s.rows());
  std::vector<int> head(n, -1);
  for (int d = 1; d < n; ++d)
    for (int h = 0; h < n; ++h)
      if (h != d && s(h, d) != kMissing && (head[d] < 0 || s(h, d) > s(head[d], d))) head[d] = h;

  const auto cycle = find_cycle(head);
  if (cycle.empty()) return head;

  std::vector<char> in_cycle(n, 0);
  for (int v : cycle) in_cycle[v] = 1;
  std::vector<int> old_of_new, new_of_old(n);
  for (int v = 0; v < n; ++v)
    if (!in_cycle[v]) {
      new_of_old[v] = static_cast<int>(old_of_new.size());
      old_of_new.push_back(v);
    }
  const int c = static_cast<int>(old_of_new.size());
  for (int v : cycle) new_of_old[v] = c;

  ArcScores t = ArcScores::Constant(c + 1, c + 1, kMissing);
  std::vector<int> enters(c + 1, -1), leaves(c + 1, -1);
  for (int u = 0; u < n; ++u) {
    for (int v = 1; v < n; ++v) {
      if (u == v || s(u, v) == kMissing) continue;
      const int nu = new_of_old[u], nv = new_of_old[v];
      if (!in_cycle[u] && !in_cycle[v]) {
        t(nu, nv) = s(u, v);
      } else if (!in_cycle[u]) {
        // Entering the cycle at v breaks the cycle edge into v.
        const double gain = s(u, v) - s(head[v], v);
        if (gain > t(nu, c)) {
          t(nu, c) = gain;
          enters[nu] = v;
        }
      } else if (!in_cycle[v]) {
        if (s(u, v) > t(c, nv)) {
          t(c, nv) = s(u, v);
          leaves[nv] = u;
        }
      }
    }
  }

  const auto sub = edmonds(t);
  std::vector<int> result(n, -1);
  for (int v = 1; v < n; ++v) {
    if (in_cycle[v]) {
      result[v] = head[v];
    } else {
      const int h = sub[new_of_old[v]];
      result[v] = h == c ? leaves[new_of_old[v]] : old_of_new[h];
    }
  }
  const int from = sub[c];
  result[enters[from]] = old_of_new[from];
  return result;
}

size_t root_children(const std::vector<int>& head) {
  size_t k = 0;
  for (size_t d = 1; d < head.size(); ++d) k += head[d] == 0;
  return k;
}

}  // namespace

std::vector<int> mst_decode(const ArcScores& scores) {
  if (scores.rows() != scores.cols() || scores.rows() < 1) throw UsageError("arc scores must be (n+1) x (n+1)");
  const Eigen::Index n = scores.rows() - 1;
  if (n == 0) return {};

  ArcScores s = scores;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Eigen::Index h = 0; h <= n; ++h) {
    for (Eigen::Index d = 0; d <= n; ++d) {
      if (d == 0 || h == d) {
        s(h, d) = kMissing;
        continue;
      }
      if (!std::isfinite(s(h, d))) throw UsageError("arc scores must be finite");
      lo = std::min(lo, s(h, d));
      hi = std::max(hi, s(h, d));
    }
  }

  auto head = edmonds(s);
  if (root_children(head) > 1) {
    // Any tree loses more from a second root child than it can gain
    // anywhere else, so the re-decode keeps a single root child.
    const double penalty = static_cast<double>(n) * (hi - lo) + 1.0;
    for (Eigen::Index d = 1; d <= n; ++d) s(0, d) -= penalty;
    head = edmonds(s);
  }
  return {head.begin() + 1, head.end()};
}

}  // namespace morphkit::tagger
