#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "comick/graph.hpp"

namespace comick {

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Global gradient-norm threshold; <= 0 disables clipping.
  double clip_norm = 5.0;
};

struct OptimizerState {
  OptimizerConfig config;
  std::uint64_t step_count = 0;
  std::vector<Tensor> first_moment;   // adam only
  std::vector<Tensor> second_moment;  // adam only
};

// Scales every gradient by threshold / norm when the global L2 norm exceeds
// threshold. Returns the norm before clipping.
double clip_global_norm(std::span<Parameter* const> params, double threshold);

class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config = {}) { state_.config = config; }

  // Applies one update from the parameters' accumulated gradients. The
  // parameter list must be the same (same order, same shapes) on every call.
  // Throws NumericError naming the parameter if any gradient is non-finite.
  void step(std::span<Parameter* const> params);

  const OptimizerState& state() const { return state_; }
  const OptimizerConfig& config() const { return state_.config; }

 private:
  OptimizerState state_;
};

}  // namespace comick
