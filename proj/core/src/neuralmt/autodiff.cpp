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

#include "adaptmt/neuralmt/autodiff.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "adaptmt/common/error.hpp"

namespace adaptmt::nmt {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMatrix>;
using ConstMatMap = Eigen::Map<const RowMatrix>;
using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void require(bool ok, const char* what) {
  if (!ok) throw ValidationError(std::string("autodiff: ") + what);
}

}  // namespace

Tape::Tape(bool record) : record_(record) { nodes_.reserve(256); }

const double* Tape::val(std::uint32_t id) const {
  const Node& n = nodes_[id];
  return n.external != nullptr ? n.external : n.value.data();
}

double* Tape::grad(std::uint32_t id) {
  Node& n = nodes_[id];
  return n.external_grad != nullptr ? n.external_grad : n.grad.data();
}

std::span<const double> Tape::value(Var v) const {
  return {val(v.id), length(v)};
}

Tape::Node Tape::make(Op op, std::size_t rows, std::size_t cols, std::initializer_list<Var> inputs) {
  Node n;
  n.op = op;
  n.rows = static_cast<std::uint32_t>(rows);
  n.cols = static_cast<std::uint32_t>(cols);
  n.value.assign(rows * cols, 0.0);
  if (record_) {
    for (Var in : inputs) {
      if (!in.valid()) continue;
      n.inputs.push_back(in.id);
      n.needs_grad = n.needs_grad || nodes_[in.id].needs_grad;
    }
  }
  return n;
}

Var Tape::push(Node node) {
  if (node.external == nullptr) {
    for (double v : node.value) {
      if (!std::isfinite(v)) throw NumericError("non-finite value in forward computation");
    }
  }
  if (!record_) {
    node.inputs.clear();
    node.cache.clear();
  }
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::leaf(const Tensor& value, std::span<double> grad_buffer) {
  Node n;
  n.op = Op::kLeaf;
  n.rows = static_cast<std::uint32_t>(value.rows());
  n.cols = static_cast<std::uint32_t>(value.cols());
  n.external = value.data().data();
  if (record_ && !grad_buffer.empty()) {
    require(grad_buffer.size() == value.size(), "gradient buffer size mismatch");
    n.external_grad = grad_buffer.data();
    n.needs_grad = true;
  }
  if (!value.all_finite()) throw NumericError("non-finite parameter value");
  return push(std::move(n));
}

Var Tape::constant(std::vector<double> values) {
  Node n;
  n.op = Op::kConstant;
  n.rows = static_cast<std::uint32_t>(values.size());
  n.value = std::move(values);
  return push(std::move(n));
}

Var Tape::row(Var m, std::size_t r) {
  require(r < rows(m), "row index out of range");
  const std::size_t c = cols(m);
  Node n = make(Op::kRow, c, 1, {m});
  n.aux = r;
  std::copy_n(val(m.id) + r * c, c, n.value.begin());
  return push(std::move(n));
}

Var Tape::affine(Var m, Var x, Var b) {
  require(cols(m) == length(x), "affine: inner dimension mismatch");
  require(!b.valid() || length(b) == rows(m), "affine: bias length mismatch");
  const std::size_t r = rows(m);
  Node n = make(Op::kAffine, r, 1, {m, x, b});
  VecMap out(n.value.data(), static_cast<Eigen::Index>(r));
  out.noalias() = ConstMatMap(val(m.id), r, cols(m)) * ConstVecMap(val(x.id), length(x));
  if (b.valid()) out += ConstVecMap(val(b.id), r);
  n.aux = b.valid() ? 1 : 0;
  return push(std::move(n));
}

Var Tape::matvec_t(Var m, Var x) {
  require(rows(m) == length(x), "matvec_t: dimension mismatch");
  const std::size_t c = cols(m);
  Node n = make(Op::kMatVecT, c, 1, {m, x});
  VecMap(n.value.data(), c).noalias() =
      ConstMatMap(val(m.id), rows(m), c).transpose() * ConstVecMap(val(x.id), length(x));
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  require(length(a) == length(b), "add: length mismatch");
  Node n = make(Op::kAdd, rows(a), cols(a), {a, b});
  const double* pa = val(a.id);
  const double* pb = val(b.id);
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value[i] = pa[i] + pb[i];
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  Node n = make(Op::kTanh, rows(a), cols(a), {a});
  const double* pa = val(a.id);
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value[i] = std::tanh(pa[i]);
  return push(std::move(n));
}

Var Tape::concat(std::initializer_list<Var> parts) {
  std::size_t total = 0;
  for (Var p : parts) total += length(p);
  Node n = make(Op::kConcat, total, 1, parts);
  std::size_t off = 0;
  for (Var p : parts) {
    std::copy_n(val(p.id), length(p), n.value.begin() + static_cast<std::ptrdiff_t>(off));
    off += length(p);
  }
  return push(std::move(n));
}

Var Tape::stack(std::span<const Var> rows_in) {
  require(!rows_in.empty(), "stack: no rows");
  const std::size_t c = length(rows_in.front());
  Node n = make(Op::kStack, rows_in.size(), c, {});
  for (std::size_t i = 0; i < rows_in.size(); ++i) {
    require(length(rows_in[i]) == c, "stack: ragged rows");
    std::copy_n(val(rows_in[i].id), c, n.value.begin() + static_cast<std::ptrdiff_t>(i * c));
    if (record_) {
      n.inputs.push_back(rows_in[i].id);
      n.needs_grad = n.needs_grad || nodes_[rows_in[i].id].needs_grad;
    }
  }
  return push(std::move(n));
}

Var Tape::softmax(Var a) {
  Node n = make(Op::kSoftmax, rows(a), cols(a), {a});
  const double* pa = val(a.id);
  const double mx = *std::max_element(pa, pa + n.value.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n.value.size(); ++i) sum += n.value[i] = std::exp(pa[i] - mx);
  for (double& v : n.value) v /= sum;
  return push(std::move(n));
}

Var Tape::log_softmax(Var a) {
  Node n = make(Op::kLogSoftmax, rows(a), cols(a), {a});
  const double* pa = val(a.id);
  const double mx = *std::max_element(pa, pa + n.value.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n.value.size(); ++i) sum += std::exp(pa[i] - mx);
  const double lse = mx + std::log(sum);
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value[i] = pa[i] - lse;
  return push(std::move(n));
}

Var Tape::pick(Var a, std::size_t index) {
  require(index < length(a), "pick: index out of range");
  Node n = make(Op::kPick, 1, 1, {a});
  n.aux = index;
  n.value[0] = val(a.id)[index];
  return push(std::move(n));
}

Var Tape::mean(std::span<const Var> scalars) {
  require(!scalars.empty(), "mean: no inputs");
  Node n = make(Op::kMean, 1, 1, {});
  double sum = 0.0;
  for (Var s : scalars) {
    require(length(s) == 1, "mean: inputs must be scalars");
    sum += val(s.id)[0];
    if (record_) {
      n.inputs.push_back(s.id);
      n.needs_grad = n.needs_grad || nodes_[s.id].needs_grad;
    }
  }
  n.value[0] = sum / static_cast<double>(scalars.size());
  return push(std::move(n));
}

Var Tape::gru(Var x, Var h, Var w_in, Var w_hid, Var b_in, Var b_hid) {
  const std::size_t hidden = length(h);
  require(rows(w_in) == 3 * hidden && cols(w_in) == length(x), "gru: input weight shape");
  require(rows(w_hid) == 3 * hidden && cols(w_hid) == hidden, "gru: hidden weight shape");
  require(length(b_in) == 3 * hidden && length(b_hid) == 3 * hidden, "gru: bias shape");

  Node n = make(Op::kGru, hidden, 1, {x, h, w_in, w_hid, b_in, b_hid});
  Eigen::VectorXd gi = ConstMatMap(val(w_in.id), 3 * hidden, length(x)) *
                       ConstVecMap(val(x.id), length(x));
  gi += ConstVecMap(val(b_in.id), 3 * hidden);
  Eigen::VectorXd gh = ConstMatMap(val(w_hid.id), 3 * hidden, hidden) *
                       ConstVecMap(val(h.id), hidden);
  gh += ConstVecMap(val(b_hid.id), 3 * hidden);

  // cache layout: r | z | n | (Wh_n h + bh_n)
  n.cache.resize(4 * hidden);
  const double* hp = val(h.id);
  for (std::size_t i = 0; i < hidden; ++i) {
    const double r = sigmoid(gi[i] + gh[i]);
    const double z = sigmoid(gi[hidden + i] + gh[hidden + i]);
    const double ghn = gh[2 * hidden + i];
    const double cand = std::tanh(gi[2 * hidden + i] + r * ghn);
    n.cache[i] = r;
    n.cache[hidden + i] = z;
    n.cache[2 * hidden + i] = cand;
    n.cache[3 * hidden + i] = ghn;
    n.value[i] = (1.0 - z) * cand + z * hp[i];
  }
  return push(std::move(n));
}

void Tape::backward(Var loss) {
  require(record_, "backward on a non-recording tape");
  require(!backward_done_, "backward called twice");
  require(length(loss) == 1, "backward needs a scalar loss");
  backward_done_ = true;
  for (Node& n : nodes_) {
    if (n.needs_grad && n.external_grad == nullptr) n.grad.assign(n.rows * n.cols, 0.0);
  }
  if (!nodes_[loss.id].needs_grad) return;
  grad(loss.id)[0] += 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    if (nodes_[i].needs_grad && nodes_[i].op != Op::kLeaf) {
      propagate(static_cast<std::uint32_t>(i));
    }
  }
}

void Tape::propagate(std::uint32_t id) {
  Node& n = nodes_[id];
  const double* g = n.grad.data();
  auto wants = [this](std::uint32_t in) { return nodes_[in].needs_grad; };

  switch (n.op) {
    case Op::kLeaf:
    case Op::kConstant:
      break;

    case Op::kRow: {
      const std::uint32_t m = n.inputs[0];
      double* gm = grad(m) + n.aux * n.rows;
      for (std::size_t i = 0; i < n.rows; ++i) gm[i] += g[i];
      break;
    }

    case Op::kAffine: {
      const std::uint32_t m = n.inputs[0], x = n.inputs[1];
      const std::size_t r = nodes_[m].rows, c = nodes_[m].cols;
      ConstVecMap gv(g, r);
      if (wants(m)) MatMap(grad(m), r, c).noalias() += gv * ConstVecMap(val(x), c).transpose();
      if (wants(x)) VecMap(grad(x), c).noalias() += ConstMatMap(val(m), r, c).transpose() * gv;
      if (n.aux == 1 && wants(n.inputs[2])) VecMap(grad(n.inputs[2]), r) += gv;
      break;
    }

    case Op::kMatVecT: {
      const std::uint32_t m = n.inputs[0], x = n.inputs[1];
      const std::size_t r = nodes_[m].rows, c = nodes_[m].cols;
      ConstVecMap gv(g, c);
      if (wants(m)) MatMap(grad(m), r, c).noalias() += ConstVecMap(val(x), r) * gv.transpose();
      if (wants(x)) VecMap(grad(x), r).noalias() += ConstMatMap(val(m), r, c) * gv;
      break;
    }

    case Op::kAdd:
      for (std::uint32_t in : n.inputs) {
        if (!wants(in)) continue;
        double* gi = grad(in);
        for (std::size_t i = 0; i < n.value.size(); ++i) gi[i] += g[i];
      }
      break;

    case Op::kTanh: {
      const std::uint32_t a = n.inputs[0];
      double* ga = grad(a);
      for (std::size_t i = 0; i < n.value.size(); ++i) ga[i] += g[i] * (1.0 - n.value[i] * n.value[i]);
      break;
    }

    case Op::kConcat:
    case Op::kStack: {
      std::size_t off = 0;
      for (std::uint32_t in : n.inputs) {
        const std::size_t len = nodes_[in].rows * nodes_[in].cols;
        if (wants(in)) {
          double* gi = grad(in);
          for (std::size_t i = 0; i < len; ++i) gi[i] += g[off + i];
        }
        off += len;
      }
      break;
    }

    case Op::kSoftmax: {
      const std::uint32_t a = n.inputs[0];
      double dot = 0.0;
      for (std::size_t i = 0; i < n.value.size(); ++i) dot += g[i] * n.value[i];
      double* ga = grad(a);
      for (std::size_t i = 0; i < n.value.size(); ++i) ga[i] += n.value[i] * (g[i] - dot);
      break;
    }

    case Op::kLogSoftmax: {
      const std::uint32_t a = n.inputs[0];
      double gsum = 0.0;
      for (std::size_t i = 0; i < n.value.size(); ++i) gsum += g[i];
      double* ga = grad(a);
      for (std::size_t i = 0; i < n.value.size(); ++i) ga[i] += g[i] - std::exp(n.value[i]) * gsum;
      break;
    }

    case Op::kPick:
      grad(n.inputs[0])[n.aux] += g[0];
      break;

    case Op::kMean: {
      const double share = g[0] / static_cast<double>(n.inputs.size());
      for (std::uint32_t in : n.inputs) {
        if (wants(in)) grad(in)[0] += share;
      }
      break;
    }

    case Op::kGru: {
      const std::uint32_t x = n.inputs[0], h = n.inputs[1], wi = n.inputs[2], wh = n.inputs[3],
                          bi = n.inputs[4], bh = n.inputs[5];
      const std::size_t hidden = n.rows;
      const std::size_t in_dim = nodes_[x].rows * nodes_[x].cols;
      const double* r = n.cache.data();
      const double* z = r + hidden;
      const double* cand = z + hidden;
      const double* ghn = cand + hidden;
      const double* hp = val(h);

      Eigen::VectorXd dgi(3 * hidden), dgh(3 * hidden);
      for (std::size_t i = 0; i < hidden; ++i) {
        const double dcand = g[i] * (1.0 - z[i]);
        const double dz = g[i] * (hp[i] - cand[i]);
        const double dn_pre = dcand * (1.0 - cand[i] * cand[i]);
        const double dr_pre = dn_pre * ghn[i] * r[i] * (1.0 - r[i]);
        const double dz_pre = dz * z[i] * (1.0 - z[i]);
        dgi[i] = dr_pre;
        dgh[i] = dr_pre;
        dgi[hidden + i] = dz_pre;
        dgh[hidden + i] = dz_pre;
        dgi[2 * hidden + i] = dn_pre;
        dgh[2 * hidden + i] = dn_pre * r[i];
      }
      if (wants(wi)) MatMap(grad(wi), 3 * hidden, in_dim).noalias() += dgi * ConstVecMap(val(x), in_dim).transpose();
      if (wants(wh)) MatMap(grad(wh), 3 * hidden, hidden).noalias() += dgh * ConstVecMap(hp, hidden).transpose();
      if (wants(bi)) VecMap(grad(bi), 3 * hidden) += dgi;
      if (wants(bh)) VecMap(grad(bh), 3 * hidden) += dgh;
      if (wants(x)) {
        VecMap(grad(x), in_dim).noalias() += ConstMatMap(val(wi), 3 * hidden, in_dim).transpose() * dgi;
      }
      if (wants(h)) {
        VecMap gh(grad(h), hidden);
        gh.noalias() += ConstMatMap(val(wh), 3 * hidden, hidden).transpose() * dgh;
        for (std::size_t i = 0; i < hidden; ++i) gh[i] += g[i] * z[i];
      }
      break;
    }
  }
}

}  // namespace adaptmt::nmt
