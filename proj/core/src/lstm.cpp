#include "comick/lstm.hpp"

#include <cmath>

#include "comick/errors.hpp"
#include "comick/ops.hpp"

namespace comick {

Tensor glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor t({rows, cols});
  for (double& v : t.data()) v = rng.uniform(-limit, limit);
  return t;
}

LstmParams LstmParams::init(const std::string& name, std::size_t input_dim,
                            std::size_t hidden_dim, Rng& rng) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  const std::size_t fan_in = input_dim + hidden_dim;
  auto weight = [&](const char* gate) {
    return Parameter(name + ".w_" + gate, glorot_uniform(hidden_dim, fan_in, rng));
  };
  auto bias = [&](const char* gate, double v) {
    return Parameter(name + ".b_" + gate, Tensor({hidden_dim}, v));
  };
  p.w_input = weight("input");
  p.b_input = bias("input", 0.0);
  p.w_forget = weight("forget");
  p.b_forget = bias("forget", 1.0);
  p.w_output = weight("output");
  p.b_output = bias("output", 0.0);
  p.w_cell = weight("cell");
  p.b_cell = bias("cell", 0.0);
  return p;
}

LstmState lstm_zero_state(Graph& g, const LstmParams& p) {
  return {g.constant(Tensor::zeros(p.hidden_dim)), g.constant(Tensor::zeros(p.hidden_dim))};
}

LstmState lstm_step(Var x, Var h_prev, Var c_prev, const LstmParams& p) {
  const Tensor& xv = x.value();
  if (xv.rank() != 1 || xv.size() != p.input_dim) {
    throw ShapeError("lstm_step: input " + xv.shape_string() + " does not match input-dim [" +
                     std::to_string(p.input_dim) + "]");
  }
  for (const Var* s : {&h_prev, &c_prev}) {
    const Tensor& sv = s->value();
    if (sv.rank() != 1 || sv.size() != p.hidden_dim) {
      throw ShapeError("lstm_step: state " + sv.shape_string() + " does not match hidden-dim [" +
                       std::to_string(p.hidden_dim) + "]");
    }
  }
  Graph& g = *x.graph;
  const Var xh = concat({x, h_prev});
  const Var i = sigmoid(linear(xh, g.param(p.w_input), g.param(p.b_input)));
  const Var f = sigmoid(linear(xh, g.param(p.w_forget), g.param(p.b_forget)));
  const Var o = sigmoid(linear(xh, g.param(p.w_output), g.param(p.b_output)));
  const Var cand = comick::tanh(linear(xh, g.param(p.w_cell), g.param(p.b_cell)));
  const Var c = add(mul(f, c_prev), mul(i, cand));
  const Var h = mul(o, comick::tanh(c));
  return {h, c};
}

BilstmParams BilstmParams::init(const std::string& name, std::size_t input_dim,
                                std::size_t hidden_dim, Rng& rng) {
  BilstmParams p;
  p.forward = LstmParams::init(name + ".fwd", input_dim, hidden_dim, rng);
  p.backward = LstmParams::init(name + ".bwd", input_dim, hidden_dim, rng);
  return p;
}

SequenceEncoder SequenceEncoder::init(const std::string& name, std::size_t input_dim,
                                      std::size_t hidden_dim, Rng& rng) {
  SequenceEncoder e;
  e.lstm = BilstmParams::init(name, input_dim, hidden_dim, rng);
  e.empty = Parameter(name + ".empty", Tensor::zeros(2 * hidden_dim));
  return e;
}

Var bilstm_encode(Graph& g, std::span<const Var> seq, const BilstmParams& p) {
  if (seq.empty()) throw ContractError("bilstm_encode: empty sequence");
  LstmState fwd = lstm_zero_state(g, p.forward);
  for (const Var& x : seq) fwd = lstm_step(x, fwd.h, fwd.c, p.forward);
  LstmState bwd = lstm_zero_state(g, p.backward);
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    bwd = lstm_step(*it, bwd.h, bwd.c, p.backward);
  }
  return concat({fwd.h, bwd.h});
}

Var bilstm_encode(Graph& g, std::span<const Var> seq, const SequenceEncoder& enc) {
  if (seq.empty()) return g.param(enc.empty);
  return bilstm_encode(g, seq, enc.lstm);
}

std::vector<Var> bilstm_states(Graph& g, std::span<const Var> seq, const BilstmParams& p) {
  const std::size_t n = seq.size();
  std::vector<Var> fwd(n), bwd(n);
  LstmState s = lstm_zero_state(g, p.forward);
  for (std::size_t t = 0; t < n; ++t) {
    s = lstm_step(seq[t], s.h, s.c, p.forward);
    fwd[t] = s.h;
  }
  s = lstm_zero_state(g, p.backward);
  for (std::size_t t = n; t-- > 0;) {
    s = lstm_step(seq[t], s.h, s.c, p.backward);
    bwd[t] = s.h;
  }
  std::vector<Var> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = concat({fwd[t], bwd[t]});
  return out;
}

}  // namespace comick
