#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "support/toy_data.hpp"
#include "srdcnn/gradcheck.hpp"
#include "srdcnn/model.hpp"

using namespace srdcnn;

namespace {

Hyperparameters tiny_hp() {
    Hyperparameters hp;
    hp.num_layers = 2;
    hp.kernel_sizes = {3, 2};
    hp.filters = {2, 2};
    return hp;
}

} // namespace

TEST_CASE("compute_batch_size follows min(round(N/10), 16) clamped to [1, N]") {
    const Hyperparameters hp;
    CHECK(compute_batch_size(467, hp) == 16);
    CHECK(compute_batch_size(67, hp) == 7);
    CHECK(compute_batch_size(5, hp) == 1);
    CHECK(compute_batch_size(1, hp) == 1);
    CHECK(compute_batch_size(10000, hp) == 16);
    Hyperparameters wide = hp;
    wide.batch_divisor = 1;
    CHECK(compute_batch_size(12, wide) == 12); // cap would allow 16, dataset does not
}

TEST_CASE("build_model has the exact parameter count of the default stack") {
    const Hyperparameters hp;
    const SrdcnnModel model = build_model(2, 24, hp, 0);
    // conv weights: 32*1*32 + 32*32*(16+8+4+2); biases: 5*32; BN affine: 5*64;
    // dense: 32*2 + 2
    const std::size_t conv_w = 32 * 1 * 32 + 32 * 32 * (16 + 8 + 4 + 2);
    const std::size_t expected = conv_w + 5 * 32 + 5 * 64 + 32 * 2 + 2;
    CHECK(trainable_parameter_count(model) == expected);
    CHECK(expected == 32290);
    CHECK(model.blocks[0].conv.in_channels() == 1);
    for (std::size_t i = 1; i < model.blocks.size(); ++i) {
        CHECK(model.blocks[i].conv.in_channels() == hp.filters[i - 1]);
    }
}

TEST_CASE("build_model is deterministic in the seed") {
    const Hyperparameters hp;
    const SrdcnnModel a = build_model(3, 16, hp, 1234);
    const SrdcnnModel b = build_model(3, 16, hp, 1234);
    const SrdcnnModel c = build_model(3, 16, hp, 1235);
    CHECK(a.blocks[0].conv.weights.storage() == b.blocks[0].conv.weights.storage());
    CHECK(a.dense.weights.storage() == b.dense.weights.storage());
    CHECK(a.blocks[0].conv.weights.storage() != c.blocks[0].conv.weights.storage());
}

TEST_CASE("build_model rejects degenerate configurations") {
    const Hyperparameters hp;
    CHECK_THROWS_AS(build_model(1, 16, hp, 0), config_error);
    Hyperparameters bad = hp;
    bad.kernel_sizes = {3, 2};
    CHECK_THROWS_AS(build_model(2, 16, bad, 0), config_error);
}

TEST_CASE("forward passes series shorter than the largest kernel") {
    const Hyperparameters hp; // kernel 32 vs T = 24
    SrdcnnModel model = build_model(2, 24, hp, 0);
    Tensor batch({2, 1, 24});
    std::mt19937_64 gen(41);
    oracles::fill_uniform(batch, gen);
    const ForwardResult r = forward(model, batch, Mode::eval);
    CHECK(r.logits.shape() == std::vector<std::size_t>{2, 2});
}

TEST_CASE("forward on all zeros of a fresh model yields exactly zero logits") {
    const Hyperparameters hp;
    SrdcnnModel model = build_model(2, 12, hp, 7);
    const Tensor batch({3, 1, 12});
    const ForwardResult r = forward(model, batch, Mode::eval);
    for (std::size_t i = 0; i < r.logits.size(); ++i) CHECK(r.logits[i] == 0.0);
}

TEST_CASE("eval forward gives identical rows for identical series") {
    const Hyperparameters hp = tiny_hp();
    SrdcnnModel model = build_model(2, 10, hp, 3);
    std::mt19937_64 gen(42);
    Tensor one({10});
    oracles::fill_uniform(one, gen);
    Tensor batch({4, 1, 10});
    for (std::size_t b = 0; b < 4; ++b) {
        std::copy(one.data(), one.data() + 10, batch.row(b, 0));
    }
    const ForwardResult r = forward(model, batch, Mode::eval);
    for (std::size_t b = 1; b < 4; ++b) {
        CHECK(r.logits(b, 0) == r.logits(0, 0));
        CHECK(r.logits(b, 1) == r.logits(0, 1));
    }
    // eval accepts lengths other than the trained one
    const ForwardResult longer = forward(model, Tensor({1, 1, 23}), Mode::eval);
    CHECK(longer.logits.shape() == std::vector<std::size_t>{1, 2});
    CHECK_THROWS_AS(forward(model, Tensor({1, 1, 23}), Mode::train), dimension_error);
}

TEST_CASE("loss_and_grads reduces to the data loss without penalties") {
    SrdcnnModel model = build_model(2, 8, tiny_hp(), 5);
    std::mt19937_64 gen(43);
    Tensor batch({4, 1, 8});
    oracles::fill_uniform(batch, gen);
    const LossGrads lg = loss_and_grads(model, batch, {0, 1, 1, 0}, PenaltyConfig{0.0, 0.0});
    CHECK(lg.regularized_cost == lg.data_loss);
    CHECK(lg.l1_term == 0.0);
    CHECK(lg.l2_term == 0.0);
}

TEST_CASE("doubling alpha2 shifts the cost by exactly the L2 term") {
    SrdcnnModel model = build_model(2, 8, tiny_hp(), 6);
    std::mt19937_64 gen(44);
    Tensor batch({4, 1, 8});
    oracles::fill_uniform(batch, gen);
    const std::vector<std::size_t> labels = {0, 1, 0, 1};

    SrdcnnModel copy = model; // running stats advance independently per call
    const PenaltyConfig base{0.01, 0.02};
    const PenaltyConfig doubled{0.01, 0.04};
    const LossGrads a = loss_and_grads(model, batch, labels, base);
    const LossGrads b = loss_and_grads(copy, batch, labels, doubled);

    double l2_sum = 0.0;
    for (const ConvBlock& blk : model.blocks) l2_sum += l2_penalty(blk.conv.weights);
    l2_sum += l2_penalty(model.dense.weights);
    CHECK(b.regularized_cost - a.regularized_cost ==
          doctest::Approx(0.02 * l2_sum).epsilon(1e-12));
}

TEST_CASE("tiny end-to-end model passes the gradient check") {
    SrdcnnModel model = build_model(2, 8, tiny_hp(), 11);
    std::mt19937_64 gen(45);
    Tensor batch({4, 1, 8});
    oracles::fill_uniform(batch, gen);
    const GradReport report =
        gradient_check(model, batch, {0, 1, 0, 1}, PenaltyConfig{0.01, 0.02}, 1e-4);
    CHECK(report.pass);
    CHECK(report.global_max < 1e-4);
}

TEST_CASE("training is deterministic for a fixed seed") {
    const LabeledDataset data = toy::waves(6, 16, 99);
    Hyperparameters hp = tiny_hp();
    hp.epochs = 10;
    hp.seed = 4;
    const TrainResult a = train(data, hp);
    const TrainResult b = train(data, hp);
    REQUIRE(a.history.epochs.size() == b.history.epochs.size());
    for (std::size_t e = 0; e < a.history.epochs.size(); ++e) {
        CHECK(a.history.epochs[e].regularized_cost == b.history.epochs[e].regularized_cost);
        CHECK(a.history.epochs[e].train_accuracy == b.history.epochs[e].train_accuracy);
    }
    CHECK(a.model.dense.weights.storage() == b.model.dense.weights.storage());
    CHECK(a.model.blocks[0].bn.running_mean.storage() == b.model.blocks[0].bn.running_mean.storage());
}

TEST_CASE("training history is internally consistent") {
    const LabeledDataset data = toy::waves(6, 16, 100);
    Hyperparameters hp = tiny_hp();
    hp.epochs = 8;
    const TrainResult r = train(data, hp);
    for (const EpochRecord& rec : r.history.epochs) {
        CHECK(std::fabs(rec.regularized_cost - rec.data_loss - rec.l1_term - rec.l2_term) < 1e-9);
        CHECK(rec.train_accuracy >= 0.0);
        CHECK(rec.train_accuracy <= 1.0);
    }
}

TEST_CASE("training separates the toy waves with default hyperparameters") {
    const LabeledDataset data = toy::waves(20, 32, 1); // 20 sines vs 20 squares
    Hyperparameters hp;
    hp.epochs = 200;
    hp.seed = 0;
    const TrainResult r = train(data, hp);
    double best = 0.0;
    for (const EpochRecord& rec : r.history.epochs) best = std::max(best, rec.train_accuracy);
    CHECK(best == 1.0);
    CHECK(r.history.epochs[49].regularized_cost < r.history.epochs[0].regularized_cost);
    CHECK(evaluate(r.model, data) == 1.0);
}

TEST_CASE("strong L1 pressure sparsifies the weights") {
    const LabeledDataset data = toy::waves(10, 16, 2);
    Hyperparameters hp;
    hp.epochs = 60;
    hp.seed = 0;

    auto near_zero_fraction = [](const SrdcnnModel& model) {
        std::size_t zeros = 0, total = 0;
        auto tally = [&](const Tensor& w) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (std::fabs(w[i]) < 1e-3) ++zeros;
            }
            total += w.size();
        };
        for (const ConvBlock& blk : model.blocks) tally(blk.conv.weights);
        tally(model.dense.weights);
        return static_cast<double>(zeros) / static_cast<double>(total);
    };

    Hyperparameters strong = hp;
    strong.penalty.alpha1 = 0.5;
    Hyperparameters none = hp;
    none.penalty.alpha1 = 0.0;
    const double with_l1 = near_zero_fraction(train(data, strong).model);
    const double without_l1 = near_zero_fraction(train(data, none).model);
    CHECK(with_l1 > without_l1);
}

TEST_CASE("training rejects unusable datasets") {
    Hyperparameters hp = tiny_hp();
    hp.epochs = 1;
    LabeledDataset empty;
    CHECK_THROWS_AS(train(empty, hp), data_error);

    LabeledDataset single = LabeledDataset::from(Tensor({3, 4}), {7, 7, 7});
    CHECK_THROWS_AS(train(single, hp), config_error);
}

TEST_CASE("predict maps through the label map and breaks ties low") {
    Hyperparameters hp = tiny_hp();
    SrdcnnModel model = build_model(2, 8, hp, 8);
    model.label_map = {5, 9};
    model.dense.weights.fill(0.0); // logits collapse to the zero bias -> tie
    const Tensor series({8}, {1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(predict(model, series) == 5);

    model.dense.bias[1] = 0.1; // now class index 1 wins
    CHECK(predict(model, series) == 9);
}

TEST_CASE("predict is invariant to a constant logit shift") {
    Hyperparameters hp = tiny_hp();
    SrdcnnModel model = build_model(2, 12, hp, 9);
    SrdcnnModel shifted = model;
    for (std::size_t c = 0; c < shifted.dense.bias.size(); ++c) shifted.dense.bias[c] += 3.75;

    std::mt19937_64 gen(46);
    for (int trial = 0; trial < 10; ++trial) {
        Tensor series({12});
        oracles::fill_uniform(series, gen);
        CHECK(predict(model, series) == predict(shifted, series));
    }
}

TEST_CASE("evaluate counts exact prediction matches") {
    Hyperparameters hp = tiny_hp();
    SrdcnnModel model = build_model(2, 6, hp, 10);
    model.label_map = {1, 2};
    model.dense.weights.fill(0.0); // always predicts label 1 (tie -> index 0)

    const LabeledDataset all_ones = LabeledDataset::from(Tensor({4, 6}), {1, 1, 1, 1});
    CHECK(evaluate(model, all_ones) == 1.0);
    const LabeledDataset three_quarters = LabeledDataset::from(Tensor({4, 6}), {1, 1, 1, 2});
    CHECK(evaluate(model, three_quarters) == 0.75);

    LabeledDataset empty;
    CHECK_THROWS_AS(evaluate(model, empty), data_error);
}
