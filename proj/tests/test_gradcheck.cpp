#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "srdcnn/gradcheck.hpp"
#include "srdcnn/regularization.hpp"

using namespace srdcnn;

TEST_CASE("numeric_gradient hand cases") {
    const Tensor at({1}, {3.0});
    const Tensor g = numeric_gradient([](const Tensor& t) { return t[0] * t[0]; }, at, 1e-5);
    CHECK(std::fabs(g[0] - 6.0) < 1e-8);

    const Tensor gc = numeric_gradient([](const Tensor&) { return 1.5; }, at, 1e-5);
    CHECK(std::fabs(gc[0]) < 1e-10);

    // d/dx of a1*|x| + a2*x^2/2 at x=2 is a1 + 2*a2
    const PenaltyConfig cfg{0.01, 0.02};
    const Tensor at2({1}, {2.0});
    const Tensor ge = numeric_gradient(
        [&](const Tensor& t) { return elastic_penalty(t, cfg); }, at2, 1e-5);
    CHECK(std::fabs(ge[0] - 0.05) < 1e-7);
    CHECK(std::fabs(ge[0] - elastic_grad(at2, cfg)[0]) < 1e-7);
}

TEST_CASE("numeric_gradient rejects bad steps and non-finite objectives") {
    const Tensor at({1}, {1.0});
    CHECK_THROWS_AS(numeric_gradient([](const Tensor& t) { return t[0]; }, at, 0.0), config_error);
    CHECK_THROWS_AS(numeric_gradient([](const Tensor& t) { return std::log(-t[0]); }, at, 1e-5),
                    numeric_error);
}

TEST_CASE("penalty-only objective reproduces elastic_grad away from zero") {
    std::mt19937_64 gen(71);
    const PenaltyConfig cfg{0.03, 0.07};
    Tensor w({20});
    for (std::size_t i = 0; i < w.size(); ++i) {
        double v = uniform_range(gen, 0.05, 1.0);
        if (gen() & 1) v = -v;
        w[i] = v;
    }
    const Tensor numeric = numeric_gradient(
        [&](const Tensor& t) { return elastic_penalty(t, cfg); }, w, 1e-5);
    const Tensor analytic = elastic_grad(w, cfg);
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(relative_error(analytic[i], numeric[i]) < 1e-6);
    }
}

TEST_CASE("compare_grads flags a sign-flipped block") {
    std::mt19937_64 gen(72);
    Tensor honest({10});
    oracles::fill_uniform(honest, gen, 0.1, 1.0);
    Tensor corrupted = honest;
    for (std::size_t i = 0; i < corrupted.size(); ++i) corrupted[i] = -corrupted[i];

    const GradReport good = compare_grads({"w"}, {honest}, {honest}, {}, 1e-4);
    CHECK(good.pass);
    const GradReport bad = compare_grads({"w"}, {corrupted}, {honest}, {}, 1e-4);
    CHECK_FALSE(bad.pass);
    CHECK(bad.global_max > 0.9);
}

TEST_CASE("gradient_check report is deterministic and stable under h refinement") {
    Hyperparameters hp;
    hp.num_layers = 2;
    hp.kernel_sizes = {3, 2};
    hp.filters = {2, 2};
    SrdcnnModel model = build_model(2, 8, hp, 21);
    std::mt19937_64 gen(73);
    Tensor batch({4, 1, 8});
    oracles::fill_uniform(batch, gen);
    const std::vector<std::size_t> labels = {0, 1, 1, 0};

    const GradReport coarse = gradient_check(model, batch, labels, hp.penalty, 1e-4, 1e-4);
    const GradReport fine = gradient_check(model, batch, labels, hp.penalty, 1e-4, 1e-5);
    const GradReport fine2 = gradient_check(model, batch, labels, hp.penalty, 1e-4, 1e-5);
    CHECK(coarse.pass);
    CHECK(fine.pass);
    CHECK(fine.global_max == fine2.global_max); // deterministic for fixed h
    // halving the step must not blow the error up (no cancellation regime)
    CHECK(fine.global_max <= 10.0 * std::max(coarse.global_max, 1e-12));
}

TEST_CASE("gradient_check demands a usable batch") {
    Hyperparameters hp;
    hp.num_layers = 1;
    hp.kernel_sizes = {2};
    hp.filters = {2};
    SrdcnnModel model = build_model(2, 4, hp, 22);
    CHECK_THROWS_AS(gradient_check(model, Tensor({1, 1, 4}), {0}, hp.penalty, 1e-4), usage_error);
}

TEST_CASE("gradient_check detects a corrupted conv backward") {
    Hyperparameters hp;
    hp.num_layers = 2;
    hp.kernel_sizes = {3, 2};
    hp.filters = {2, 2};
    SrdcnnModel model = build_model(2, 8, hp, 23);
    std::mt19937_64 gen(74);
    Tensor batch({4, 1, 8});
    oracles::fill_uniform(batch, gen);
    const std::vector<std::size_t> labels = {0, 1, 0, 1};

    // honest pass first
    const GradReport honest = gradient_check(model, batch, labels, hp.penalty, 1e-4);
    REQUIRE(honest.pass);

    // recompute analytic grads, flip the sign of the first conv weight block
    // and compare against a numeric gradient computed the same way
    LossGrads lg = loss_and_grads(model, batch, labels, hp.penalty);
    for (std::size_t i = 0; i < lg.grads[0].size(); ++i) lg.grads[0][i] = -lg.grads[0][i];

    auto cost = [&](const Tensor& w) {
        SrdcnnModel scratch = model;
        scratch.blocks[0].conv.weights = w;
        ForwardResult fwd = forward(scratch, batch, Mode::train);
        double value = softmax_xent(fwd.logits, labels).loss;
        for (const ConvBlock& blk : scratch.blocks) value += elastic_penalty(blk.conv.weights, hp.penalty);
        value += elastic_penalty(scratch.dense.weights, hp.penalty);
        return value;
    };
    const Tensor numeric = numeric_gradient(cost, model.blocks[0].conv.weights, 1e-5);
    const GradReport corrupted = compare_grads({"conv1.weight"}, {lg.grads[0]}, {numeric}, {}, 1e-4);
    CHECK_FALSE(corrupted.pass);
}
