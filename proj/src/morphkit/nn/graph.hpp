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
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "morphkit/nn/tensor.hpp"

namespace morphkit::nn {

// Handle to a node of a Graph.
struct Expr {
  int id = -1;
};

// Reverse-mode tape over dense row-major matrices. Nodes are recorded in
// evaluation order; backward() walks them in reverse. A graph built with
// recording disabled computes values only and never touches gradients.
template <typename T>
class Graph {
 public:
  using Mat = Matrix<T>;

  explicit Graph(bool recording = true) : recording_(recording) {}

  bool recording() const { return recording_; }
  size_t size() const { return nodes_.size(); }
  const Mat& value(Expr e) const { return nodes_[e.id].value; }
  T scalar(Expr e) const { return nodes_[e.id].value(0, 0); }

  Expr constant(Mat value) { return push(std::move(value), false, {}); }

  Expr param(Parameter<T>& p) {
    Expr out = push(p.value, recording_, {});
    if (recording_) {
      const int id = out.id;
      nodes_[id].backward = [this, id, &p] { p.grad += nodes_[id].grad; };
    }
    return out;
  }

  // Rows of an embedding table.
  Expr lookup(Parameter<T>& table, std::vector<int> ids) {
    Mat v(static_cast<Index>(ids.size()), table.value.cols());
    for (size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 0 || ids[i] >= table.value.rows()) throw UsageError("lookup id out of range in " + table.name);
      v.row(static_cast<Index>(i)) = table.value.row(ids[i]);
    }
    Expr out = push(std::move(v), recording_, {});
    if (recording_) {
      const int id = out.id;
      nodes_[id].backward = [this, id, &table, ids = std::move(ids)] {
        const Mat& g = nodes_[id].grad;
        for (size_t i = 0; i < ids.size(); ++i) table.grad.row(ids[i]) += g.row(static_cast<Index>(i));
      };
    }
    return out;
  }

  Expr matmul(Expr a, Expr b) {
    check(value(a).cols() == value(b).rows(), "matmul");
    return binary(a, b, value(a) * value(b), [this](int ia, int ib, const Mat& g) {
      accumulate(ia, g * value_of(ib).transpose());
      accumulate(ib, value_of(ia).transpose() * g);
    });
  }

  // a * b^T
  Expr matmul_nt(Expr a, Expr b) {
    check(value(a).cols() == value(b).cols(), "matmul_nt");
    return binary(a, b, value(a) * value(b).transpose(), [this](int ia, int ib, const Mat& g) {
      accumulate(ia, g * value_of(ib));
      accumulate(ib, g.transpose() * value_of(ia));
    });
  }

  Expr add(Expr a, Expr b) {
    check(same_shape(a, b), "add");
    return binary(a, b, value(a) + value(b), [this](int ia, int ib, const Mat& g) {
      accumulate(ia, g);
      accumulate(ib, g);
    });
  }

  // Adds a 1 x c row to every row of a.
  Expr add_row(Expr a, Expr row) {
    check(value(row).rows() == 1 && value(row).cols() == value(a).cols(), "add_row");
    Mat v = value(a).rowwise() + value(row).row(0);
    return binary(a, row, std::move(v), [this](int ia, int ir, const Mat& g) {
      accumulate(ia, g);
      accumulate(ir, g.colwise().sum());
    });
  }

  Expr mul(Expr a, Expr b) {
    check(same_shape(a, b), "mul");
    return binary(a, b, value(a).cwiseProduct(value(b)), [this](int ia, int ib, const Mat& g) {
      accumulate(ia, g.cwiseProduct(value_of(ib)));
      accumulate(ib, g.cwiseProduct(value_of(ia)));
    });
  }

  Expr scale(Expr a, T s) {
    return unary(a, value(a) * s, [this, s](int ia, int, const Mat& g) { accumulate(ia, g * s); });
  }

  Expr one_minus(Expr a) {
    Mat v = (-value(a)).array() + T(1);
    return unary(a, std::move(v), [this](int ia, int, const Mat& g) { accumulate(ia, -g); });
  }

  Expr sigmoid(Expr a) {
    Mat v = value(a).unaryExpr([](T x) { return T(1) / (T(1) + std::exp(-x)); });
    return unary(a, std::move(v), [this](int ia, int self, const Mat& g) {
      const Mat& y = value_of(self);
      accumulate(ia, g.cwiseProduct(y.cwiseProduct((T(1) - y.array()).matrix())));
    });
  }

  Expr tanh(Expr a) {
    Mat v = value(a).array().tanh().matrix();
    return unary(a, std::move(v), [this](int ia, int self, const Mat& g) {
      const Mat& y = value_of(self);
      accumulate(ia, g.cwiseProduct((T(1) - y.array().square()).matrix()));
    });
  }

  Expr concat_cols(const std::vector<Expr>& parts) {
    check(!parts.empty(), "concat_cols");
    const Index rows = value(parts[0]).rows();
    Index cols = 0;
    for (auto p : parts) {
      check(value(p).rows() == rows, "concat_cols");
      cols += value(p).cols();
    }
    Mat v(rows, cols);
    Index at = 0;
    bool any = false;
    for (auto p : parts) {
      v.middleCols(at, value(p).cols()) = value(p);
      at += value(p).cols();
      any = any || needs_grad(p);
    }
    Expr out = push(std::move(v), any, {});
    if (any) {
      const int id = out.id;
      std::vector<int> ids;
      for (auto p : parts) ids.push_back(p.id);
      nodes_[id].backward = [this, id, ids] {
        Index at = 0;
        for (int pid : ids) {
          const Index w = nodes_[pid].value.cols();
          accumulate(pid, nodes_[id].grad.middleCols(at, w));
          at += w;
        }
      };
    }
    return out;
  }

  Expr concat_rows(const std::vector<Expr>& parts) {
    check(!parts.empty(), "concat_rows");
    const Index cols = value(parts[0]).cols();
    Index rows = 0;
    for (auto p : parts) {
      check(value(p).cols() == cols, "concat_rows");
      rows += value(p).rows();
    }
    Mat v(rows, cols);
    Index at = 0;
    bool any = false;
    for (auto p : parts) {
      v.middleRows(at, value(p).rows()) = value(p);
      at += value(p).rows();
      any = any || needs_grad(p);
    }
    Expr out = push(std::move(v), any, {});
    if (any) {
      const int id = out.id;
      std::vector<int> ids;
      for (auto p : parts) ids.push_back(p.id);
      nodes_[id].backward = [this, id, ids] {
        Index at = 0;
        for (int pid : ids) {
          const Index h = nodes_[pid].value.rows();
          accumulate(pid, nodes_[id].grad.middleRows(at, h));
          at += h;
        }
      };
    }
    return out;
  }

  Expr slice_cols(Expr a, Index start, Index count) {
    check(start >= 0 && count >= 0 && start + count <= value(a).cols(), "slice_cols");
    Mat v = value(a).middleCols(start, count);
    return unary(a, std::move(v), [this, start, count](int ia, int, const Mat& g) {
      accumulate_block(ia, 0, start, g.rows(), count, g);
    });
  }

  Expr slice_rows(Expr a, Index start, Index count) {
    check(start >= 0 && count >= 0 && start + count <= value(a).rows(), "slice_rows");
    Mat v = value(a).middleRows(start, count);
    return unary(a, std::move(v), [this, start, count](int ia, int, const Mat& g) {
      accumulate_block(ia, start, 0, count, g.cols(), g);
    });
  }

  // Row i of the result is row index[i] of a, or zeros when index[i] < 0.
  Expr gather_rows(Expr a, std::vector<int> index) {
    const Mat& src = value(a);
    Mat v = Mat::Zero(static_cast<Index>(index.size()), src.cols());
    for (size_t i = 0; i < index.size(); ++i) {
      check(index[i] < src.rows(), "gather_rows");
      if (index[i] >= 0) v.row(static_cast<Index>(i)) = src.row(index[i]);
    }
    const bool grad = needs_grad(a);
    Expr out = push(std::move(v), grad, {});
    if (grad) {
      const int id = out.id, ia = a.id;
      nodes_[id].backward = [this, id, ia, index = std::move(index)] {
        Mat& dst = grad_of(ia);
        const Mat& g = nodes_[id].grad;
        for (size_t i = 0; i < index.size(); ++i)
          if (index[i] >= 0) dst.row(index[i]) += g.row(static_cast<Index>(i));
      };
    }
    return out;
  }

  // Row-wise outer product: out(r, i*q + j) = a(r, i) * b(r, j).
  Expr row_outer(Expr a, Expr b) {
    const Mat& x = value(a);
    const Mat& y = value(b);
    check(x.rows() == y.rows(), "row_outer");
    const Index p = x.cols(), q = y.cols();
    Mat v(x.rows(), p * q);
    for (Index r = 0; r < x.rows(); ++r)
      for (Index i = 0; i < p; ++i) v.row(r).segment(i * q, q) = x(r, i) * y.row(r);
    return binary(a, b, std::move(v), [this, p, q](int ia, int ib, const Mat& g) {
      const Mat& x = value_of(ia);
      const Mat& y = value_of(ib);
      Mat dx = Mat::Zero(x.rows(), p), dy = Mat::Zero(y.rows(), q);
      for (Index r = 0; r < x.rows(); ++r)
        for (Index i = 0; i < p; ++i) {
          auto seg = g.row(r).segment(i * q, q);
          dx(r, i) = seg.dot(y.row(r));
          dy.row(r) += x(r, i) * seg;
        }
      accumulate(ia, dx);
      accumulate(ib, dy);
    });
  }

  // Multiplies by a fixed (pre-scaled) mask.
  Expr dropout(Expr a, Mat mask) {
    check(mask.rows() == value(a).rows() && mask.cols() == value(a).cols(), "dropout");
    Mat v = value(a).cwiseProduct(mask);
    return unary(a, std::move(v), [this, mask = std::move(mask)](int ia, int, const Mat& g) {
      accumulate(ia, g.cwiseProduct(mask));
    });
  }

  Expr sum_all(Expr a) {
    Mat v(1, 1);
    v(0, 0) = value(a).sum();
    return unary(a, std::move(v), [this](int ia, int, const Mat& g) {
      accumulate(ia, Mat::Constant(value_of(ia).rows(), value_of(ia).cols(), g(0, 0)));
    });
  }

  Expr sum(const std::vector<Expr>& scalars) {
    Mat v = Mat::Zero(1, 1);
    bool any = false;
    for (auto s : scalars) {
      check(value(s).rows() == 1 && value(s).cols() == 1, "sum");
      v(0, 0) += scalar(s);
      any = any || needs_grad(s);
    }
    Expr out = push(std::move(v), any, {});
    if (any) {
      const int id = out.id;
      std::vector<int> ids;
      for (auto s : scalars) ids.push_back(s.id);
      nodes_[id].backward = [this, id, ids] {
        for (int sid : ids) accumulate(sid, nodes_[id].grad);
      };
    }
    return out;
  }

  // Summed cross-entropy of row-wise softmax. Rows whose target is negative
  // are skipped. When allowed is given, entries with allowed(r, c) == 0 are
  // excluded from that row's softmax.
  Expr softmax_cross_entropy(Expr logits, std::vector<int> targets, const Mat* allowed = nullptr) {
    const Mat& z = value(logits);
    check(static_cast<Index>(targets.size()) == z.rows(), "softmax_cross_entropy");
    if (allowed) check(allowed->rows() == z.rows() && allowed->cols() == z.cols(), "softmax_cross_entropy mask");
    Mat probs = Mat::Zero(z.rows(), z.cols());
    T loss = 0;
    for (Index r = 0; r < z.rows(); ++r) {
      if (targets[r] < 0) continue;
      check(targets[r] < z.cols() && (!allowed || (*allowed)(r, targets[r]) != 0), "softmax target");
      T mx = -std::numeric_limits<T>::infinity();
      for (Index c = 0; c < z.cols(); ++c)
        if (!allowed || (*allowed)(r, c) != 0) mx = std::max(mx, z(r, c));
      T total = 0;
      for (Index c = 0; c < z.cols(); ++c)
        if (!allowed || (*allowed)(r, c) != 0) total += (probs(r, c) = std::exp(z(r, c) - mx));
      probs.row(r) /= total;
      loss -= std::log(probs(r, targets[r]));
    }
    Mat v(1, 1);
    v(0, 0) = loss;
    return unary(logits, std::move(v),
                 [this, probs = std::move(probs), targets = std::move(targets)](int ia, int, const Mat& g) {
                   Mat d = probs;
                   for (Index r = 0; r < d.rows(); ++r)
                     if (targets[r] >= 0) d(r, targets[r]) -= T(1);
                   accumulate(ia, d * g(0, 0));
                 });
  }

  void backward(Expr loss) {
    check(value(loss).rows() == 1 && value(loss).cols() == 1, "backward needs a scalar");
    if (!recording_) throw UsageError("backward on a non-recording graph");
    if (!needs_grad(loss)) return;
    grad_of(loss.id)(0, 0) += T(1);
    for (int i = loss.id; i >= 0; --i) {
      Node& n = nodes_[i];
      if (n.needs_grad && n.backward && n.grad.size() > 0) n.backward();
    }
  }

 private:
  struct Node {
    Mat value;
    Mat grad;
    std::function<void()> backward;
    bool needs_grad = false;
  };

  using Backward = std::function<void(int, int, const Mat&)>;

  static void check(bool ok, const char* op) {
    if (!ok) throw UsageError(std::string("shape mismatch in ") + op);
  }

  bool same_shape(Expr a, Expr b) const {
    return value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols();
  }
  bool needs_grad(Expr e) const { return nodes_[e.id].needs_grad; }
  const Mat& value_of(int id) const { return nodes_[id].value; }

  Mat& grad_of(int id) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0 && n.value.size() > 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
    return n.grad;
  }

  template <typename Derived>
  void accumulate(int id, const Eigen::MatrixBase<Derived>& g) {
    if (!nodes_[id].needs_grad) return;
    grad_of(id) += g;
  }

  template <typename Derived>
  void accumulate_block(int id, Index r, Index c, Index rows, Index cols, const Eigen::MatrixBase<Derived>& g) {
    if (!nodes_[id].needs_grad) return;
    grad_of(id).block(r, c, rows, cols) += g;
  }

  Expr push(Mat value, bool needs_grad, std::function<void()> backward) {
    nodes_.push_back(Node{std::move(value), Mat(), std::move(backward), needs_grad && recording_});
    return Expr{static_cast<int>(nodes_.size()) - 1};
  }

  Expr unary(Expr a, Mat v, Backward bw) {
    const bool grad = needs_grad(a);
    Expr out = push(std::move(v), grad, {});
    if (grad) {
      const int id = out.id, ia = a.id;
      nodes_[id].backward = [this, id, ia, bw = std::move(bw)] { bw(ia, id, nodes_[id].grad); };
    }
    return out;
  }

  Expr binary(Expr a, Expr b, Mat v, Backward bw) {
    const bool grad = needs_grad(a) || needs_grad(b);
    Expr out = push(std::move(v), grad, {});
    if (grad) {
      const int id = out.id, ia = a.id, ib = b.id;
      nodes_[id].backward = [this, id, ia, ib, bw = std::move(bw)] { bw(ia, ib, nodes_[id].grad); };
    }
    return out;
  }

  bool recording_;
  std::vector<Node> nodes_;
};

}  // namespace morphkit::nn
