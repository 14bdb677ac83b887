#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sentnet/gradcheck.hpp"
#include "sentnet/graph.hpp"
#include "sentnet/optim.hpp"

using namespace sentnet;

TEST_CASE("sigmoid at zero is one half") {
    Graph g;
    const int y = g.sigmoid(g.constant(Tensor::vector({0.0})));
    CHECK(g.value(y).data[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("softmax of equal logits is uniform") {
    Graph g;
    const int y = g.softmax(g.constant(Tensor::vector({1.0, 1.0, 1.0})));
    for (double v : g.value(y).data) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("l2normalize of [3,4]") {
    Graph g;
    const int y = g.l2normalize(g.constant(Tensor::vector({3.0, 4.0})));
    CHECK(g.value(y).data[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(g.value(y).data[1] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("l2normalize rejects near-zero input") {
    Graph g;
    CHECK_THROWS_AS(g.l2normalize(g.constant(Tensor::vector({0.0, 1e-13}))), DegenerateNormError);
}

TEST_CASE("shape mismatch names the op") {
    Graph g;
    const int a = g.constant(Tensor::vector({1.0, 2.0}));
    const int b = g.constant(Tensor::vector({1.0, 2.0, 3.0}));
    CHECK_THROWS_WITH_AS(g.add(a, b), doctest::Contains("add"), ShapeError);
    CHECK_THROWS_AS(g.matmul(a, b), ShapeError);
}

TEST_CASE("softmax output is a probability simplex for random inputs") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        std::vector<double> x(static_cast<std::size_t>(n));
        for (double& v : x) v = rng.gaussian(0.0, 20.0);
        Graph g;
        const int y = g.softmax(g.constant(Tensor::vector(x)));
        double sum = 0.0;
        for (double v : g.value(y).data) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("l2normalize output has unit norm for random inputs") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(3);
        for (double& v : x) v = rng.gaussian(0.0, 5.0);
        if (Tensor::vector(x).l2_norm() < 1e-12) continue;
        Graph g;
        const int y = g.l2normalize(g.constant(Tensor::vector(x)));
        CHECK(std::abs(g.value(y).l2_norm() - 1.0) <= 1e-9);
    }
}

TEST_CASE("backward of a linear form") {
    Graph g;
    const int w = g.param("w", Tensor::vector({1.0, 2.0}));
    const int x = g.constant(Tensor::vector({3.0, 4.0}));
    const int loss = g.dot(w, x);
    g.backward(loss);
    const GradMap grads = g.param_grads();
    CHECK(grads.at("w").data[0] == doctest::Approx(3.0));
    CHECK(grads.at("w").data[1] == doctest::Approx(4.0));
}

TEST_CASE("backward of sigmoid at zero gives one quarter") {
    Graph g;
    const int w = g.param("w", Tensor::vector({0.0}));
    const int loss = g.dot(g.sigmoid(w), g.constant(Tensor::vector({1.0})));
    g.backward(loss);
    CHECK(g.param_grads().at("w").data[0] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("backward rejects non-scalar loss") {
    Graph g;
    const int w = g.param("w", Tensor::vector({1.0, 2.0}));
    CHECK_THROWS_AS(g.backward(w), ContractError);
}

TEST_CASE("grad_check on a quadratic") {
    ParamStore params;
    params.add("w", Tensor::vector({1.0, -2.0}));
    const auto build = [&](Graph& g) {
        const int w = g.param("w", params.tensor("w"));
        return g.dot(w, w);
    };
    const GradCheckReport report = grad_check(build, params, 1e-4, 1e-6);
    CHECK(report.pass());
    CHECK(report.max_rel_err < 1e-6);

    Graph g;
    const int w = g.param("w", params.tensor("w"));
    g.backward(g.dot(w, w));
    CHECK(g.param_grads().at("w").data[0] == doctest::Approx(2.0));
    CHECK(g.param_grads().at("w").data[1] == doctest::Approx(-4.0));
}

TEST_CASE("grad_check flags a non-deterministic builder") {
    ParamStore params;
    params.add("w", Tensor::vector({1.0}));
    int calls = 0;
    const auto build = [&](Graph& g) {
        const int w = g.param("w", params.tensor("w"));
        const int jitter = g.constant(Tensor::vector({static_cast<double>(++calls)}));
        return g.dot(w, jitter);
    };
    CHECK_THROWS_AS(grad_check(build, params, 1e-4, 1e-3), DeterminismError);
}

TEST_CASE("grad_check covers composite expressions") {
    // softmax, l2normalize, concat, scale, matmul, relu, dropout-free chain
    ParamStore params;
    params.add("a", Tensor::vector({0.3, -1.2, 0.4}));
    params.add("M", Tensor::matrix(3, 3, {0.1, -0.2, 0.3, 0.5, 0.4, -0.6, 0.2, 0.1, 0.9}));
    const auto build = [&](Graph& g) {
        const int a = g.param("a", params.tensor("a"));
        const int m = g.param("M", params.tensor("M"));
        const int h = g.relu(g.matmul(m, a));
        const int s = g.softmax(g.concat({g.dot(a, h), g.dot(a, a)}));
        const int n = g.l2normalize(g.add(a, g.scale(h, g.dot(s, g.constant(Tensor::vector(
                                                             {1.0, 0.0}))))));
        const int lg = g.log(g.sigmoid(g.dot(n, a)));
        return g.scale(lg, g.scalar(-1.0));
    };
    const GradCheckReport report = grad_check(build, params, 1e-4, 1e-3);
    CHECK(report.pass());
}

TEST_CASE("clip_gradients leaves small gradients alone") {
    GradMap grads;
    grads["a"] = Tensor::vector({12.0, 16.0}); // norm 20
    const GradMap clipped = clip_gradients(grads, 40.0);
    CHECK(clipped.at("a").data[0] == 12.0);
    CHECK(clipped.at("a").data[1] == 16.0);
}

TEST_CASE("clip_gradients scales a single large gradient") {
    GradMap grads;
    grads["a"] = Tensor::vector({80.0});
    const GradMap clipped = clip_gradients(grads, 40.0);
    CHECK(clipped.at("a").data[0] == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("clip_gradients scales across tensors by the global norm") {
    GradMap grads;
    grads["a"] = Tensor::vector({30.0});
    grads["b"] = Tensor::vector({40.0}); // global norm 50
    const GradMap clipped = clip_gradients(grads, 40.0);
    CHECK(clipped.at("a").data[0] == doctest::Approx(24.0).epsilon(1e-12));
    CHECK(clipped.at("b").data[0] == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(global_grad_norm(clipped) <= 40.0 + 1e-9);
}

TEST_CASE("clip_gradients is idempotent") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        GradMap grads;
        for (int p = 0; p < 3; ++p) {
            std::vector<double> v(4);
            for (double& x : v) x = rng.gaussian(0.0, 30.0);
            grads["p" + std::to_string(p)] = Tensor::vector(v);
        }
        const GradMap once = clip_gradients(grads, 40.0);
        const GradMap twice = clip_gradients(once, 40.0);
        for (const auto& [name, g] : once)
            for (std::size_t i = 0; i < g.size(); ++i)
                CHECK(g.data[i] == twice.at(name).data[i]);
    }
}

TEST_CASE("adam leaves parameters unchanged under zero gradients") {
    ParamStore params;
    params.add("w", Tensor::vector({1.0, -5.0}));
    GradMap grads;
    grads["w"] = Tensor::zeros({2});
    AdamState adam;
    adam.step(params, grads, 0.01);
    CHECK(params.tensor("w").data[0] == 1.0);
    CHECK(params.tensor("w").data[1] == -5.0);
}

TEST_CASE("adam first step matches the reference formula") {
    // w=1, g=1, lr=0.01, t=1 -> w = 1 - 0.01 / (1 + 1e-8)
    ParamStore params;
    params.add("w", Tensor::vector({1.0}));
    GradMap grads;
    grads["w"] = Tensor::vector({1.0});
    AdamState adam;
    adam.step(params, grads, 0.01);
    CHECK(params.tensor("w").data[0] == doctest::Approx(0.9900000001).epsilon(1e-12));
}

TEST_CASE("adam trajectories are bit-identical across reruns") {
    auto run = [] {
        ParamStore params;
        params.add("w", Tensor::vector({0.5, -0.25}));
        AdamState adam;
        Rng rng(42);
        for (int step = 0; step < 10; ++step) {
            GradMap grads;
            grads["w"] = Tensor::vector({rng.gaussian(0, 1), rng.gaussian(0, 1)});
            adam.step(params, grads, 0.01);
        }
        return params.tensor("w").data;
    };
    const auto a = run();
    const auto b = run();
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
}

TEST_CASE("adam rejects mismatched gradient shapes") {
    ParamStore params;
    params.add("w", Tensor::vector({1.0, 2.0}));
    GradMap grads;
    grads["w"] = Tensor::vector({1.0});
    AdamState adam;
    CHECK_THROWS_AS(adam.step(params, grads, 0.01), ShapeError);
}

TEST_CASE("dropout uses inverted scaling and exact mask gradients") {
    Rng rng(5);
    Graph g;
    const int x = g.param("x", Tensor::vector({1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}));
    const int y = g.dropout(x, 0.5, rng);
    for (std::size_t i = 0; i < 8; ++i) {
        const double v = g.value(y).data[i];
        CHECK((v == 0.0 || v == 2.0));
    }
    const int loss = g.dot(y, g.constant(Tensor::vector(std::vector<double>(8, 1.0))));
    g.backward(loss);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(g.param_grads().at("x").data[i] == g.value(y).data[i]);
}

TEST_CASE("embed_lookup routes gradients to the looked-up row") {
    Graph g;
    const int table = g.param("E", Tensor::matrix(3, 2, {1, 2, 3, 4, 5, 6}));
    const int row = g.embed_lookup(table, 1);
    CHECK(g.value(row).data[0] == 3.0);
    CHECK(g.value(row).data[1] == 4.0);
    g.backward(g.dot(row, g.constant(Tensor::vector({10.0, 20.0}))));
    const GradMap grads = g.param_grads();
    const Tensor& grad = grads.at("E");
    CHECK(grad.at(0, 0) == 0.0);
    CHECK(grad.at(1, 0) == 10.0);
    CHECK(grad.at(1, 1) == 20.0);
    CHECK(grad.at(2, 1) == 0.0);
}
