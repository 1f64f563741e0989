#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "comick/tensor.hpp"

namespace comick {

// A named trainable tensor together with its accumulated gradient.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor init)
      : name(std::move(name)), value(std::move(init)), grad(Tensor::zeros_like(value)) {}

  void zero_grad() { grad.fill(0.0); }

  std::string name;
  Tensor value;
  Tensor grad;
};

enum class OpKind : std::uint8_t {
  kConstant,
  kParameter,
  kParameterRow,
  kMatVec,
  kAdd,
  kSub,
  kMul,
  kScale,
  kScaleBy,
  kSigmoid,
  kTanh,
  kConcat,
  kSlice,
  kSoftmax,
  kCrossEntropy,
  kSum,
  kMean,
};

const char* op_name(OpKind kind);

class Graph;

// Handle to a node of a Graph. Cheap to copy; only valid while the graph lives.
struct Var {
  Graph* graph = nullptr;
  std::uint32_t index = 0;

  const Tensor& value() const;
  const Tensor& grad() const;
};

// Dynamic reverse-mode tape. Nodes are appended in evaluation order, so the
// tape itself is a topological order of the (acyclic) expression graph.
//
// A graph built with Mode::kTrain binds parameter leaves to Parameter::grad
// and backward() accumulates into them; such a graph must only be built over
// parameters the caller is allowed to mutate. Mode::kInference graphs never
// touch Parameter::grad, so several of them may read one model concurrently.
class Graph {
 public:
  enum class Mode { kTrain, kInference };

  // Called during backward with the node's output gradient.
  using BackwardFn = std::function<void(Graph&, const Tensor& out_grad)>;

  explicit Graph(Mode mode = Mode::kTrain) : mode_(mode) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Mode mode() const { return mode_; }
  bool trains() const { return mode_ == Mode::kTrain; }

  Var constant(Tensor value);
  // Leaf bound to a parameter. Repeated calls return the same node.
  Var param(const Parameter& p);
  // Leaf holding one row of a rank-2 parameter (embedding lookup).
  Var param_row(const Parameter& table, std::size_t row);

  Var record(OpKind kind, Tensor value, std::vector<std::uint32_t> parents,
             BackwardFn backward);

  const Tensor& value(std::uint32_t i) const;
  const Tensor& value(Var v) const { return value(v.index); }
  // Gradient of a node; an all-zero tensor when backward never reached it.
  const Tensor& grad(Var v) const;
  // Mutable gradient slot, materialized on first use.
  Tensor& grad_slot(std::uint32_t i);

  OpKind kind(Var v) const { return nodes_[v.index].kind; }
  const std::vector<std::uint32_t>& parents(Var v) const { return nodes_[v.index].parents; }
  std::size_t size() const { return nodes_.size(); }

  // Reverse accumulation from a scalar root. Parameter gradients are added to
  // Parameter::grad (callers zero them between steps).
  void backward(Var root);

 private:
  struct Node {
    OpKind kind = OpKind::kConstant;
    Tensor owned;
    const Tensor* external = nullptr;
    Tensor grad;
    Tensor* external_grad = nullptr;
    std::vector<std::uint32_t> parents;
    BackwardFn backward;
  };

  Mode mode_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::uint32_t> param_nodes_;
  mutable Tensor zero_scratch_;
};

}  // namespace comick
