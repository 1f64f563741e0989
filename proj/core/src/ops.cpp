#include "comick/ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "comick/errors.hpp"

namespace comick {

namespace {

Graph& graph_of(Var a, Var b) {
  if (a.graph == nullptr || a.graph != b.graph) {
    throw ContractError("operands belong to different graphs");
  }
  return *a.graph;
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

void require_vector(const char* op, const Tensor& a) {
  if (a.rank() != 1) {
    throw ShapeError(std::string(op) + ": expected a vector, got " + a.shape_string());
  }
}

}  // namespace

Var matvec(Var w, Var x) {
  Graph& g = graph_of(w, x);
  const Tensor& wv = w.value();
  const Tensor& xv = x.value();
  if (wv.rank() != 2 || xv.rank() != 1 || wv.cols() != xv.size()) {
    throw ShapeError("matvec: cannot multiply " + wv.shape_string() + " by " +
                     xv.shape_string());
  }
  const std::size_t m = wv.rows();
  const std::size_t n = wv.cols();
  Tensor out = Tensor::zeros(m);
  const double* wp = wv.data().data();
  const double* xp = xv.data().data();
  for (std::size_t r = 0; r < m; ++r) {
    double acc = 0.0;
    const double* row = wp + r * n;
    for (std::size_t c = 0; c < n; ++c) acc += row[c] * xp[c];
    out[r] = acc;
  }
  const auto wi = w.index;
  const auto xi = x.index;
  return g.record(OpKind::kMatVec, std::move(out), {wi, xi},
                  [wi, xi, m, n](Graph& gr, const Tensor& go) {
                    const double* wp = gr.value(wi).data().data();
                    const double* xp = gr.value(xi).data().data();
                    double* gw = gr.grad_slot(wi).data().data();
                    double* gx = gr.grad_slot(xi).data().data();
                    for (std::size_t r = 0; r < m; ++r) {
                      const double gr_r = go[r];
                      if (gr_r == 0.0) continue;
                      const double* row = wp + r * n;
                      double* grow = gw + r * n;
                      for (std::size_t c = 0; c < n; ++c) {
                        grow[c] += gr_r * xp[c];
                        gx[c] += gr_r * row[c];
                      }
                    }
                  });
}

Var add(Var a, Var b) {
  Graph& g = graph_of(a, b);
  require_same_shape("add", a.value(), b.value());
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
  const auto ai = a.index, bi = b.index;
  return g.record(OpKind::kAdd, std::move(out), {ai, bi},
                  [ai, bi](Graph& gr, const Tensor& go) {
                    Tensor& ga = gr.grad_slot(ai);
                    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i];
                    Tensor& gb = gr.grad_slot(bi);
                    for (std::size_t i = 0; i < go.size(); ++i) gb[i] += go[i];
                  });
}

Var sub(Var a, Var b) {
  Graph& g = graph_of(a, b);
  require_same_shape("sub", a.value(), b.value());
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.value()[i];
  const auto ai = a.index, bi = b.index;
  return g.record(OpKind::kSub, std::move(out), {ai, bi},
                  [ai, bi](Graph& gr, const Tensor& go) {
                    Tensor& ga = gr.grad_slot(ai);
                    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i];
                    Tensor& gb = gr.grad_slot(bi);
                    for (std::size_t i = 0; i < go.size(); ++i) gb[i] -= go[i];
                  });
}

Var mul(Var a, Var b) {
  Graph& g = graph_of(a, b);
  require_same_shape("mul", a.value(), b.value());
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  const auto ai = a.index, bi = b.index;
  return g.record(OpKind::kMul, std::move(out), {ai, bi},
                  [ai, bi](Graph& gr, const Tensor& go) {
                    const Tensor& av = gr.value(ai);
                    const Tensor& bv = gr.value(bi);
                    Tensor& ga = gr.grad_slot(ai);
                    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * bv[i];
                    Tensor& gb = gr.grad_slot(bi);
                    for (std::size_t i = 0; i < go.size(); ++i) gb[i] += go[i] * av[i];
                  });
}

Var scale(Var a, double factor) {
  Graph& g = *a.graph;
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor;
  const auto ai = a.index;
  return g.record(OpKind::kScale, std::move(out), {ai},
                  [ai, factor](Graph& gr, const Tensor& go) {
                    Tensor& ga = gr.grad_slot(ai);
                    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * factor;
                  });
}

Var scale_by(Var s, Var v) {
  Graph& g = graph_of(s, v);
  if (s.value().size() != 1) {
    throw ShapeError("scale_by: scale must hold one element, got " + s.value().shape_string() +
                     " against " + v.value().shape_string());
  }
  const double f = s.value()[0];
  Tensor out = v.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= f;
  const auto si = s.index, vi = v.index;
  return g.record(OpKind::kScaleBy, std::move(out), {si, vi},
                  [si, vi](Graph& gr, const Tensor& go) {
                    const double f = gr.value(si)[0];
                    const Tensor& vv = gr.value(vi);
                    double ds = 0.0;
                    Tensor& gv = gr.grad_slot(vi);
                    for (std::size_t i = 0; i < go.size(); ++i) {
                      ds += go[i] * vv[i];
                      gv[i] += go[i] * f;
                    }
                    gr.grad_slot(si)[0] += ds;
                  });
}

Var sigmoid(Var a) {
  Graph& g = *a.graph;
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = out[i];
    // Branches keep exp() from overflowing for large |x|.
    out[i] = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
  const auto ai = a.index;
  Tensor y = out;
  return g.record(OpKind::kSigmoid, std::move(out), {ai},
                  [ai, y = std::move(y)](Graph& gr, const Tensor& go) {
                    Tensor& ga = gr.grad_slot(ai);
                    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * y[i] * (1.0 - y[i]);
                  });
}

Var tanh(Var a) {
  Graph& g = *a.graph;
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  const auto ai = a.index;
  Tensor y = out;
  return g.record(OpKind::kTanh, std::move(out), {ai},
                  [ai, y = std::move(y)](Graph& gr, const Tensor& go) {
                    Tensor& ga = gr.grad_slot(ai);
                    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * (1.0 - y[i] * y[i]);
                  });
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat: no operands");
  Graph& g = *parts.front().graph;
  std::vector<double> data;
  std::vector<std::uint32_t> idx;
  std::vector<std::size_t> sizes;
  for (const Var& p : parts) {
    if (p.graph != &g) throw ContractError("concat: operands belong to different graphs");
    require_vector("concat", p.value());
    const auto v = p.value().data();
    data.insert(data.end(), v.begin(), v.end());
    idx.push_back(p.index);
    sizes.push_back(v.size());
  }
  auto parents = idx;
  return g.record(OpKind::kConcat, Tensor::vector(std::move(data)), std::move(parents),
                  [idx = std::move(idx), sizes = std::move(sizes)](Graph& gr, const Tensor& go) {
                    std::size_t off = 0;
                    for (std::size_t k = 0; k < idx.size(); ++k) {
                      Tensor& gp = gr.grad_slot(idx[k]);
                      for (std::size_t i = 0; i < sizes[k]; ++i) gp[i] += go[off + i];
                      off += sizes[k];
                    }
                  });
}

Var concat(std::initializer_list<Var> parts) {
  return concat(std::span<const Var>(parts.begin(), parts.size()));
}

Var slice(Var a, std::size_t offset, std::size_t length) {
  Graph& g = *a.graph;
  const Tensor& av = a.value();
  require_vector("slice", av);
  if (offset + length > av.size()) {
    throw ShapeError("slice: range [" + std::to_string(offset) + ", " +
                     std::to_string(offset + length) + ") exceeds " + av.shape_string());
  }
  std::vector<double> data(av.data().begin() + static_cast<std::ptrdiff_t>(offset),
                           av.data().begin() + static_cast<std::ptrdiff_t>(offset + length));
  const auto ai = a.index;
  return g.record(OpKind::kSlice, Tensor::vector(std::move(data)), {ai},
                  [ai, offset](Graph& gr, const Tensor& go) {
                    Tensor& ga = gr.grad_slot(ai);
                    for (std::size_t i = 0; i < go.size(); ++i) ga[offset + i] += go[i];
                  });
}

Var sum(Var a) {
  Graph& g = *a.graph;
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const auto ai = a.index;
  return g.record(OpKind::kSum, Tensor::vector({s}), {ai}, [ai](Graph& gr, const Tensor& go) {
    Tensor& ga = gr.grad_slot(ai);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += go[0];
  });
}

Var mean(std::span<const Var> scalars) {
  if (scalars.empty()) throw ContractError("mean: no operands");
  Graph& g = *scalars.front().graph;
  double s = 0.0;
  std::vector<std::uint32_t> idx;
  for (const Var& v : scalars) {
    if (v.value().size() != 1) {
      throw ShapeError("mean: operands must be scalars, got " + v.value().shape_string());
    }
    s += v.value()[0];
    idx.push_back(v.index);
  }
  const double inv = 1.0 / static_cast<double>(scalars.size());
  auto parents = idx;
  return g.record(OpKind::kMean, Tensor::vector({s * inv}), std::move(parents),
                  [idx = std::move(idx), inv](Graph& gr, const Tensor& go) {
                    for (auto i : idx) gr.grad_slot(i)[0] += go[0] * inv;
                  });
}

Var linear(Var x, Var w, Var b) {
  const Tensor& wv = w.value();
  const Tensor& xv = x.value();
  const Tensor& bv = b.value();
  if (wv.rank() != 2 || xv.rank() != 1 || wv.cols() != xv.size()) {
    throw ShapeError("linear: weight " + wv.shape_string() + " does not accept input " +
                     xv.shape_string());
  }
  if (bv.rank() != 1 || bv.size() != wv.rows()) {
    throw ShapeError("linear: bias " + bv.shape_string() + " does not match weight " +
                     wv.shape_string());
  }
  return add(matvec(w, x), b);
}

Tensor softmax_values(const Tensor& z) {
  if (z.empty()) throw ShapeError("softmax: empty input " + z.shape_string());
  if (auto bad = z.first_non_finite(); bad != z.size()) {
    throw NumericError("softmax: non-finite logit at index " + std::to_string(bad));
  }
  const double mx = *std::max_element(z.data().begin(), z.data().end());
  Tensor p = z;
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(p[i] - mx);
    total += p[i];
  }
  for (std::size_t i = 0; i < p.size(); ++i) p[i] /= total;
  return p;
}

Var softmax(Var z) {
  Graph& g = *z.graph;
  require_vector("softmax", z.value());
  Tensor p = softmax_values(z.value());
  const auto zi = z.index;
  Tensor y = p;
  return g.record(OpKind::kSoftmax, std::move(p), {zi},
                  [zi, y = std::move(y)](Graph& gr, const Tensor& go) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < go.size(); ++i) dot += go[i] * y[i];
                    Tensor& gz = gr.grad_slot(zi);
                    for (std::size_t i = 0; i < go.size(); ++i) gz[i] += y[i] * (go[i] - dot);
                  });
}

Var cross_entropy(Var probs, std::size_t gold) {
  Graph& g = *probs.graph;
  const Tensor& pv = probs.value();
  require_vector("cross_entropy", pv);
  if (gold >= pv.size()) {
    throw IndexError("cross_entropy: gold class " + std::to_string(gold) +
                     " out of range for " + std::to_string(pv.size()) + " classes");
  }
  const double denom = pv[gold] + kLogEpsilon;
  const auto pi = probs.index;
  return g.record(OpKind::kCrossEntropy, Tensor::vector({-std::log(denom)}), {pi},
                  [pi, gold, denom](Graph& gr, const Tensor& go) {
                    gr.grad_slot(pi)[gold] -= go[0] / denom;
                  });
}

}  // namespace comick
