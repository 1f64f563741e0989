#include "comick/graph.hpp"

#include "comick/errors.hpp"

namespace comick {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kConstant: return "constant";
    case OpKind::kParameter: return "parameter";
    case OpKind::kParameterRow: return "parameter_row";
    case OpKind::kMatVec: return "matvec";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kScaleBy: return "scale_by";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kTanh: return "tanh";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kCrossEntropy: return "cross_entropy";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
  }
  return "unknown";
}

const Tensor& Var::value() const { return graph->value(*this); }
const Tensor& Var::grad() const { return graph->grad(*this); }

Var Graph::constant(Tensor value) {
  Node n;
  n.kind = OpKind::kConstant;
  n.owned = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::param(const Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) {
    return {this, it->second};
  }
  Node n;
  n.kind = OpKind::kParameter;
  n.external = &p.value;
  if (trains()) {
    // Training graphs are only built over mutable models (see class comment).
    n.external_grad = const_cast<Tensor*>(&p.grad);
  }
  nodes_.push_back(std::move(n));
  const auto idx = static_cast<std::uint32_t>(nodes_.size() - 1);
  param_nodes_.emplace(&p, idx);
  return {this, idx};
}

Var Graph::param_row(const Parameter& table, std::size_t row) {
  if (table.value.rank() != 2 || row >= table.value.rows()) {
    throw IndexError("row " + std::to_string(row) + " out of range for parameter '" +
                     table.name + "' of shape " + table.value.shape_string());
  }
  const auto r = table.value.row(row);
  Tensor v = Tensor::vector(std::vector<double>(r.begin(), r.end()));
  BackwardFn bw;
  if (trains()) {
    auto* target = const_cast<Tensor*>(&table.grad);
    bw = [target, row](Graph&, const Tensor& g) {
      auto dst = target->row(row);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[i];
    };
  }
  return record(OpKind::kParameterRow, std::move(v), {}, std::move(bw));
}

Var Graph::record(OpKind kind, Tensor value, std::vector<std::uint32_t> parents,
                  BackwardFn backward) {
  Node n;
  n.kind = kind;
  n.owned = std::move(value);
  n.parents = std::move(parents);
  if (trains()) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

const Tensor& Graph::value(std::uint32_t i) const {
  const Node& n = nodes_[i];
  return n.external ? *n.external : n.owned;
}

const Tensor& Graph::grad(Var v) const {
  const Node& n = nodes_[v.index];
  if (n.external_grad) return *n.external_grad;
  if (!n.grad.empty()) return n.grad;
  zero_scratch_ = Tensor::zeros_like(value(v.index));
  return zero_scratch_;
}

Tensor& Graph::grad_slot(std::uint32_t i) {
  Node& n = nodes_[i];
  if (n.external_grad) return *n.external_grad;
  if (n.grad.empty() && !value(i).empty()) n.grad = Tensor::zeros_like(value(i));
  return n.grad;
}

void Graph::backward(Var root) {
  if (root.graph != this) throw ContractError("backward: root belongs to another graph");
  if (!trains()) throw ContractError("backward: graph was built for inference");
  const Tensor& rv = value(root.index);
  if (rv.size() != 1) {
    throw ContractError("backward: root must be scalar, got shape " + rv.shape_string());
  }
  Tensor& seed = grad_slot(root.index);
  seed[0] += 1.0;
  for (std::int64_t i = root.index; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.backward) continue;
    if (n.grad.empty()) continue;  // not reached from root
    // The closure may grow parents' grad slots but never touches this node.
    n.backward(*this, n.grad);
  }
}

}  // namespace comick
