#include <gtest/gtest.h>

#include <cmath>

#include "comick/errors.hpp"
#include "comick/grad_check.hpp"
#include "comick/ops.hpp"
#include "comick/rng.hpp"

namespace comick {
namespace {

TEST(Tensor, ShapeAndDataMustAgree) {
  EXPECT_THROW(Tensor({2, 3}, std::vector<double>(5)), ShapeError);
  Tensor t({2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_DOUBLE_EQ(t.at(1, 2), 6.0);
  EXPECT_EQ(t.shape_string(), "[2x3]");
  EXPECT_DOUBLE_EQ(t.squared_norm(), 91.0);
}

TEST(Tensor, FiniteChecks) {
  Tensor t = Tensor::vector({1.0, NAN, 3.0});
  EXPECT_FALSE(t.all_finite());
  EXPECT_EQ(t.first_non_finite(), 1u);
  EXPECT_TRUE(Tensor::zeros(4).all_finite());
}

TEST(Ops, MatVecAndLinearValues) {
  Graph g;
  Var w = g.constant(Tensor({2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6}));
  Var x = g.constant(Tensor::vector({1, 0, -1}));
  Var b = g.constant(Tensor::vector({0.5, -0.5}));
  EXPECT_EQ(matvec(w, x).value(), Tensor::vector({-2, -2}));
  EXPECT_EQ(linear(x, w, b).value(), Tensor::vector({-1.5, -2.5}));
}

TEST(Ops, ShapeErrorsNameBothShapes) {
  Graph g;
  Var a = g.constant(Tensor::zeros(3));
  Var b = g.constant(Tensor::zeros(2));
  try {
    add(a, b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("[3]"), std::string::npos);
    EXPECT_NE(msg.find("[2]"), std::string::npos);
  }
  Var w = g.constant(Tensor({2, 2}));
  EXPECT_THROW(matvec(w, a), ShapeError);
  EXPECT_THROW(scale_by(a, b), ShapeError);
}

TEST(Ops, SoftmaxStaysInOpenSimplex) {
  Graph g;
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Tensor z = Tensor::zeros(1 + rng.index(8));
    for (double& v : z.data()) v = rng.uniform(-5.0, 5.0);
    const Tensor p = softmax(g.constant(z)).value();
    double s = 0.0;
    for (double v : p.data()) {
      EXPECT_GT(v, 0.0);
      if (p.size() > 1) EXPECT_LT(v, 1.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Ops, SoftmaxHandlesLargeLogits) {
  Graph g;
  const Tensor p = softmax(g.constant(Tensor::vector({1000.0, 1000.0}))).value();
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(Ops, SoftmaxRejectsNonFiniteLogit) {
  Graph g;
  try {
    softmax(g.constant(Tensor::vector({0.0, INFINITY, 1.0})));
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
}

TEST(Ops, CrossEntropyValues) {
  Graph g;
  Var p = g.constant(Tensor::vector({0.25, 0.75}));
  EXPECT_NEAR(cross_entropy(p, 1).value()[0], -std::log(0.75 + kLogEpsilon), 1e-15);
  Var zero = g.constant(Tensor::vector({0.0, 1.0}));
  EXPECT_TRUE(std::isfinite(cross_entropy(zero, 0).value()[0]));
  EXPECT_THROW(cross_entropy(p, 2), IndexError);
}

TEST(Ops, SigmoidIsStableAtExtremes) {
  Graph g;
  const Tensor s = sigmoid(g.constant(Tensor::vector({-800.0, 0.0, 800.0}))).value();
  EXPECT_EQ(s[0], 0.0);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
  EXPECT_EQ(s[2], 1.0);
}

TEST(Ops, ConcatAndSlice) {
  Graph g;
  Var a = g.constant(Tensor::vector({1, 2}));
  Var b = g.constant(Tensor::vector({3}));
  Var c = concat({a, b});
  EXPECT_EQ(c.value(), Tensor::vector({1, 2, 3}));
  EXPECT_EQ(slice(c, 1, 2).value(), Tensor::vector({2, 3}));
  EXPECT_THROW(slice(c, 2, 2), ShapeError);
}

TEST(Graph, BackwardRequiresScalarRoot) {
  Graph g;
  Var v = g.constant(Tensor::zeros(2));
  EXPECT_THROW(g.backward(v), ContractError);
}

TEST(Graph, InferenceGraphRefusesBackward) {
  Parameter p("p", Tensor::vector({1.0, 2.0}));
  Graph g(Graph::Mode::kInference);
  Var s = sum(g.param(p));
  EXPECT_THROW(g.backward(s), ContractError);
  EXPECT_EQ(p.grad, Tensor::zeros(2));
}

TEST(Graph, ParamNodesAreShared) {
  Parameter p("p", Tensor::vector({1.0, 2.0}));
  Graph g;
  EXPECT_EQ(g.param(p).index, g.param(p).index);
  Var s = sum(mul(g.param(p), g.param(p)));
  g.backward(s);
  EXPECT_EQ(p.grad, Tensor::vector({2.0, 4.0}));
}

TEST(Graph, ParamRowAccumulatesIntoTableRow) {
  Parameter table("t", Tensor({3, 2}, std::vector<double>{1, 2, 3, 4, 5, 6}));
  Graph g;
  Var r = g.param_row(table, 1);
  EXPECT_EQ(r.value(), Tensor::vector({3, 4}));
  g.backward(add(sum(r), sum(g.param_row(table, 1))));
  EXPECT_EQ(table.grad, Tensor({3, 2}, std::vector<double>{0, 0, 2, 2, 0, 0}));
}

TEST(Graph, UnreachedNodeHasZeroGrad) {
  Parameter p("p", Tensor::vector({1.0}));
  Graph g;
  Var unused = g.constant(Tensor::vector({4.0, 5.0}));
  g.backward(sum(g.param(p)));
  EXPECT_EQ(g.grad(unused), Tensor::zeros(2));
}

TEST(GradCheck, LinearFunctionIsExact) {
  Parameter w("w", Tensor({2, 3}, std::vector<double>{0.1, -0.2, 0.3, 0.4, 0.5, -0.6}));
  Parameter x("x", Tensor::vector({1.0, -2.0, 0.5}));
  std::vector<Parameter*> ps = {&w, &x};
  const auto r = grad_check([&](Graph& g) { return sum(matvec(g.param(w), g.param(x))); },
                            ps);
  EXPECT_LT(r.max_relative_error, 1e-9);
  EXPECT_EQ(r.coordinates, 9u);
  EXPECT_EQ(w.grad, Tensor::zeros_like(w.value));
}

TEST(GradCheck, ConstantFunctionHasZeroGradient) {
  Parameter w("w", Tensor::vector({1.0, 2.0}));
  std::vector<Parameter*> ps = {&w};
  const auto r = grad_check([&](Graph& g) { return sum(g.constant(Tensor::vector({3.0}))); }, ps);
  EXPECT_LT(std::abs(r.analytic), 1e-12);
  EXPECT_LT(std::abs(r.numeric), 1e-12);
}

TEST(GradCheck, EveryPrimitive) {
  Rng rng(11);
  for (int seed = 0; seed < 10; ++seed) {
    Parameter a("a", Tensor::zeros(4)), b("b", Tensor::zeros(4)), s("s", Tensor::zeros(1));
    for (Parameter* p : {&a, &b, &s}) {
      for (double& v : p->value.data()) v = rng.uniform(-1.5, 1.5);
    }
    std::vector<Parameter*> ps = {&a, &b, &s};
    const auto r = grad_check(
        [&](Graph& g) {
          Var x = g.param(a), y = g.param(b);
          Var t = add(tanh(mul(x, y)), sigmoid(sub(x, scale(y, 0.5))));
          Var u = scale_by(g.param(s), concat({slice(t, 0, 2), slice(x, 2, 2)}));
          Var p = softmax(u);
          Var ce = cross_entropy(p, static_cast<std::size_t>(seed % 4));
          std::vector<Var> parts = {ce, sum(y)};
          return mean(parts);
        },
        ps);
    EXPECT_LT(r.max_relative_error, 1e-6) << r.worst_parameter << "[" << r.worst_index << "]";
  }
}

}  // namespace
}  // namespace comick
