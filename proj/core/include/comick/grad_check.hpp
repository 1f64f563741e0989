#pragma once

#include <functional>
#include <span>
#include <string>

#include "comick/graph.hpp"

namespace comick {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t coordinates = 0;
};

// Builds a scalar loss on the given graph from the current parameter values.
using LossBuilder = std::function<Var(Graph&)>;

// Compares backward() against central differences
//   (f(theta + eps e_i) - f(theta - eps e_i)) / (2 eps)
// for every coordinate of every listed parameter. The relative error of one
// coordinate is |a - n| / max(|a|, |n|, 1e-8). Parameter values are restored
// and gradients left zeroed on return.
GradCheckResult grad_check(const LossBuilder& loss, std::span<Parameter* const> params,
                           double eps = 1e-5);

}  // namespace comick
