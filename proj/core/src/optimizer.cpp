#include "comick/optimizer.hpp"

#include <cmath>

#include "comick/errors.hpp"

namespace comick {

double clip_global_norm(std::span<Parameter* const> params, double threshold) {
  double sq = 0.0;
  for (const Parameter* p : params) sq += p->grad.squared_norm();
  const double norm = std::sqrt(sq);
  if (threshold > 0.0 && norm > threshold) {
    const double factor = threshold / norm;
    for (Parameter* p : params) {
      for (double& g : p->grad.data()) g *= factor;
    }
  }
  return norm;
}

void Optimizer::step(std::span<Parameter* const> params) {
  for (const Parameter* p : params) {
    if (!p->grad.same_shape(p->value)) {
      throw ShapeError("optimizer: gradient " + p->grad.shape_string() + " vs value " +
                       p->value.shape_string() + " for parameter '" + p->name + "'");
    }
    if (auto bad = p->grad.first_non_finite(); bad != p->grad.size()) {
      throw NumericError("optimizer: non-finite gradient in parameter '" + p->name +
                         "' at index " + std::to_string(bad));
    }
  }
  const OptimizerConfig& cfg = state_.config;
  clip_global_norm(params, cfg.clip_norm);
  ++state_.step_count;

  if (cfg.kind == OptimizerKind::kSgd) {
    for (Parameter* p : params) {
      auto v = p->value.data();
      const auto g = p->grad.data();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= cfg.learning_rate * g[i];
    }
    return;
  }

  if (state_.first_moment.empty()) {
    for (const Parameter* p : params) {
      state_.first_moment.push_back(Tensor::zeros_like(p->value));
      state_.second_moment.push_back(Tensor::zeros_like(p->value));
    }
  }
  if (state_.first_moment.size() != params.size()) {
    throw ContractError("optimizer: parameter list changed between steps");
  }
  const double t = static_cast<double>(state_.step_count);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    Tensor& m = state_.first_moment[k];
    Tensor& s = state_.second_moment[k];
    if (!m.same_shape(p.value)) {
      throw ShapeError("optimizer: moment shape " + m.shape_string() + " vs parameter '" +
                       p.name + "' " + p.value.shape_string());
    }
    auto v = p.value.data();
    const auto g = p.grad.data();
    for (std::size_t i = 0; i < v.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      s[i] = cfg.beta2 * s[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double s_hat = s[i] / correction2;
      v[i] -= cfg.learning_rate * m_hat / (std::sqrt(s_hat) + cfg.epsilon);
    }
  }
}

}  // namespace comick
