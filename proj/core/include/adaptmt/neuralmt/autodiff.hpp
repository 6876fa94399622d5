// Copyright 2026 The adaptmt Authors.
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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "adaptmt/neuralmt/tensor.hpp"

namespace adaptmt::nmt {

// Handle to a node recorded on a Tape.
struct Var {
  std::uint32_t id = kNone;

  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  bool valid() const noexcept { return id != kNone; }
};

/// Reverse-mode automatic differentiation over vectors and row-major
/// matrices.
///
/// Every operation appends a node holding its value; `backward` walks the
/// nodes in reverse creation order. Leaves reference caller-owned storage:
/// values are read in place and gradients are accumulated into a caller
/// buffer, so a model can be differentiated without copying its parameters.
/// When constructed with `record = false` the tape only evaluates values
/// (used for decoding) and `backward` is unavailable.
///
/// Every produced value is checked for NaN/Inf; a non-finite result throws
/// NumericError.
class Tape {
 public:
  explicit Tape(bool record = true);

  bool recording() const noexcept { return record_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  // `value` must outlive the tape. When `grad` is non-null it must have the
  // same length; backward() adds into it.
  Var leaf(const Tensor& value, std::span<double> grad = {});
  Var constant(std::vector<double> values);

  // Row `r` of matrix `m` as a vector (embedding lookup).
  Var row(Var m, std::size_t r);
  // m x + b, with b optional.
  Var affine(Var m, Var x, Var b = {});
  // transpose(m) x.
  Var matvec_t(Var m, Var x);
  Var add(Var a, Var b);
  Var tanh(Var a);
  Var concat(std::initializer_list<Var> parts);
  // Stacks equally sized vectors as the rows of a matrix.
  Var stack(std::span<const Var> rows);
  Var softmax(Var a);
  Var log_softmax(Var a);
  // Scalar a[index].
  Var pick(Var a, std::size_t index);
  // Scalar mean of scalars.
  Var mean(std::span<const Var> scalars);

  // Gated recurrent unit step. w_in: [3H x in], w_hid: [3H x H], biases
  // [3H], gate blocks ordered (reset, update, candidate):
  //   r = sigmoid(Wi_r x + bi_r + Wh_r h + bh_r)
  //   z = sigmoid(Wi_z x + bi_z + Wh_z h + bh_z)
  //   n = tanh(Wi_n x + bi_n + r * (Wh_n h + bh_n))
  //   h' = (1 - z) * n + z * h
  Var gru(Var x, Var h, Var w_in, Var w_hid, Var b_in, Var b_hid);

  std::span<const double> value(Var v) const;
  double scalar(Var v) const { return value(v)[0]; }
  std::size_t rows(Var v) const { return nodes_[v.id].rows; }
  std::size_t cols(Var v) const { return nodes_[v.id].cols; }

  // Seeds d(loss)/d(loss) = 1 and propagates to every leaf with a gradient
  // buffer. `loss` must be a scalar. May be called once per tape.
  void backward(Var loss);

 private:
  enum class Op : std::uint8_t {
    kLeaf, kConstant, kRow, kAffine, kMatVecT, kAdd, kTanh, kConcat,
    kStack, kSoftmax, kLogSoftmax, kPick, kMean, kGru,
  };

  struct Node {
    Op op = Op::kConstant;
    std::uint32_t rows = 0;
    std::uint32_t cols = 1;
    bool needs_grad = false;
    std::vector<double> value;
    const double* external = nullptr;
    double* external_grad = nullptr;
    std::vector<double> grad;
    std::vector<std::uint32_t> inputs;
    std::size_t aux = 0;
    std::vector<double> cache;
  };

  Var push(Node node);
  Node make(Op op, std::size_t rows, std::size_t cols, std::initializer_list<Var> inputs);
  const double* val(std::uint32_t id) const;
  double* grad(std::uint32_t id);
  std::size_t length(Var v) const { return nodes_[v.id].rows * nodes_[v.id].cols; }
  void propagate(std::uint32_t id);

  bool record_;
  bool backward_done_ = false;
  std::vector<Node> nodes_;
};

}  // namespace adaptmt::nmt
