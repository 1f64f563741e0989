#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "comick/graph.hpp"
#include "comick/rng.hpp"

namespace comick {

// Glorot-uniform rows x cols matrix.
Tensor glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);

// One LSTM cell. Each gate owns a weight over the concatenation [x; h_prev]
// and a bias.
struct LstmParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Parameter w_input, b_input;
  Parameter w_forget, b_forget;
  Parameter w_output, b_output;
  Parameter w_cell, b_cell;

  // Glorot weights, zero biases, forget bias 1.
  static LstmParams init(const std::string& name, std::size_t input_dim,
                         std::size_t hidden_dim, Rng& rng);

  template <typename F>
  void visit(F&& f) {
    for (Parameter* p : {&w_input, &b_input, &w_forget, &b_forget, &w_output, &b_output,
                         &w_cell, &b_cell}) {
      f(*p);
    }
  }
  template <typename F>
  void visit(F&& f) const {
    for (const Parameter* p : {&w_input, &b_input, &w_forget, &b_forget, &w_output,
                               &b_output, &w_cell, &b_cell}) {
      f(*p);
    }
  }
};

struct LstmState {
  Var h;
  Var c;
};

// Standard LSTM update:
//   i = sigmoid(W_i [x; h] + b_i), f = sigmoid(W_f [x; h] + b_f),
//   o = sigmoid(W_o [x; h] + b_o), g = tanh(W_c [x; h] + b_c),
//   c' = f * c + i * g,            h' = o * tanh(c').
LstmState lstm_step(Var x, Var h_prev, Var c_prev, const LstmParams& p);

// Zero initial state on x's graph.
LstmState lstm_zero_state(Graph& g, const LstmParams& p);

struct BilstmParams {
  LstmParams forward;
  LstmParams backward;

  static BilstmParams init(const std::string& name, std::size_t input_dim,
                           std::size_t hidden_dim, Rng& rng);
  std::size_t hidden_dim() const { return forward.hidden_dim; }
  std::size_t output_dim() const { return 2 * forward.hidden_dim; }

  template <typename F>
  void visit(F&& f) {
    forward.visit(f);
    backward.visit(f);
  }
  template <typename F>
  void visit(F&& f) const {
    forward.visit(f);
    backward.visit(f);
  }
};

// A bi-LSTM that summarizes a whole sequence into one vector, with a trainable
// vector standing in for the encoding of an empty sequence.
struct SequenceEncoder {
  BilstmParams lstm;
  Parameter empty;

  static SequenceEncoder init(const std::string& name, std::size_t input_dim,
                              std::size_t hidden_dim, Rng& rng);
  std::size_t output_dim() const { return lstm.output_dim(); }

  template <typename F>
  void visit(F&& f) {
    lstm.visit(f);
    f(empty);
  }
  template <typename F>
  void visit(F&& f) const {
    lstm.visit(f);
    f(empty);
  }
};

// [final forward state; final backward state]. The backward pass reads seq in
// reverse; both passes start from zero states. seq must be non-empty.
Var bilstm_encode(Graph& g, std::span<const Var> seq, const BilstmParams& p);

// Same as above, but an empty sequence yields the encoder's sentinel vector.
Var bilstm_encode(Graph& g, std::span<const Var> seq, const SequenceEncoder& enc);

// Per-position [forward_t; backward_t] states for a sequence tagger.
std::vector<Var> bilstm_states(Graph& g, std::span<const Var> seq, const BilstmParams& p);

}  // namespace comick
