#include "comick/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "comick/errors.hpp"

namespace comick {

namespace {

double evaluate(const LossBuilder& loss) {
  Graph g(Graph::Mode::kInference);
  const Var root = loss(g);
  if (root.value().size() != 1) {
    throw ContractError("grad_check: loss must be scalar, got " + root.value().shape_string());
  }
  return root.value()[0];
}

}  // namespace

GradCheckResult grad_check(const LossBuilder& loss, std::span<Parameter* const> params,
                           double eps) {
  if (!(eps > 0.0)) throw ContractError("grad_check: eps must be positive");
  for (Parameter* p : params) p->zero_grad();
  {
    Graph g(Graph::Mode::kTrain);
    g.backward(loss(g));
  }
  std::vector<Tensor> analytic;
  analytic.reserve(params.size());
  for (Parameter* p : params) {
    analytic.push_back(p->grad);
    p->zero_grad();
  }

  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + eps;
      const double plus = evaluate(loss);
      p.value[i] = saved - eps;
      const double minus = evaluate(loss);
      p.value[i] = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[k][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      const double rel = std::abs(a - numeric) / denom;
      ++result.coordinates;
      if (result.worst_parameter.empty() || rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_parameter = p.name;
        result.worst_index = i;
        result.analytic = a;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace comick
