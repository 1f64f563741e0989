#pragma once

#include <cstddef>
#include <span>

#include "comick/graph.hpp"

namespace comick {

// Added inside cross_entropy's logarithm so that a zero probability yields a
// large finite loss instead of infinity.
inline constexpr double kLogEpsilon = 1e-12;

// Differentiable primitives. Every op checks shapes eagerly and throws
// ShapeError naming both operands; all of them record onto the inputs' graph.

Var matvec(Var w, Var x);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // element-wise
Var scale(Var a, double factor);
// s must hold a single element; returns s * v.
Var scale_by(Var s, Var v);
Var sigmoid(Var a);
Var tanh(Var a);
Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);
Var slice(Var a, std::size_t offset, std::size_t length);
Var sum(Var a);
// Arithmetic mean of scalar nodes.
Var mean(std::span<const Var> scalars);

// W x + b.
Var linear(Var x, Var w, Var b);

// Numerically stable softmax (max-subtracted). Throws NumericError naming the
// first non-finite logit.
Var softmax(Var z);

// -log(probs[gold] + kLogEpsilon). Throws IndexError for gold outside [0, k).
Var cross_entropy(Var probs, std::size_t gold);

// Plain-value helpers shared with the analysis code.
Tensor softmax_values(const Tensor& z);

}  // namespace comick
