#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "support/oracles.hpp"
#include "support/toy_data.hpp"
#include "srdcnn/dtw.hpp"

using namespace srdcnn;

namespace {

const DtwConfig kFull{1.0, true};

std::vector<double> random_series(std::size_t n, std::mt19937_64& gen) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform_range(gen, -2.0, 2.0);
    return v;
}

} // namespace

TEST_CASE("dtw distance hand cases") {
    const std::vector<double> a = {0, 0, 1};
    const std::vector<double> b = {0, 1, 1};
    CHECK(dtw_distance(a, a, kFull) == 0.0);
    CHECK(dtw_distance(a, b, kFull) == 0.0); // warping aligns the step edges

    const std::vector<double> one = {0.0};
    const std::vector<double> three = {3.0};
    CHECK(dtw_distance(one, three, kFull) == 9.0);
    CHECK(dtw_distance(one, three, DtwConfig{1.0, false}) == 3.0); // |a-b| local cost

    CHECK_THROWS_AS(dtw_distance({}, a, kFull), data_error);
}

TEST_CASE("dtw is symmetric, nonnegative and bounded by the diagonal path") {
    std::mt19937_64 gen(61);
    for (int trial = 0; trial < 25; ++trial) {
        const auto a = random_series(12, gen);
        const auto b = random_series(12, gen);
        const double d_ab = dtw_distance(a, b, kFull);
        const double d_ba = dtw_distance(b, a, kFull);
        CHECK(d_ab >= 0.0);
        CHECK(d_ab == d_ba);

        double diagonal = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) diagonal += (a[i] - b[i]) * (a[i] - b[i]);
        CHECK(d_ab <= diagonal + 1e-12);
    }
}

TEST_CASE("shrinking the warping window never decreases the distance") {
    std::mt19937_64 gen(62);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = random_series(16, gen);
        const auto b = random_series(16, gen);
        double previous = dtw_distance(a, b, DtwConfig{0.0, true});
        for (double w : {0.1, 0.25, 0.5, 0.75, 1.0}) {
            const double d = dtw_distance(a, b, DtwConfig{w, true});
            CHECK(d <= previous + 1e-12);
            previous = d;
        }
    }
}

TEST_CASE("dtw handles unequal lengths within the band") {
    std::mt19937_64 gen(63);
    const auto a = random_series(9, gen);
    const auto b = random_series(17, gen);
    const double d = dtw_distance(a, b, kFull);
    CHECK(std::isfinite(d));
    CHECK(d >= 0.0);
    // the widened band keeps the end cell reachable even at window 0
    CHECK(std::isfinite(dtw_distance(a, b, DtwConfig{0.0, true})));
}

TEST_CASE("bounded dtw agrees with the plain dynamic program") {
    std::mt19937_64 gen(64);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_series(10, gen);
        const auto b = random_series(10, gen);
        const double exact = dtw_distance(a, b, kFull);
        CHECK(dtw_distance_bounded(a, b, kFull, std::numeric_limits<double>::infinity()) == exact);
        // any cutoff above the true distance must not change the result
        CHECK(dtw_distance_bounded(a, b, kFull, exact + 1.0) == exact);
        // a cutoff below it must come back at or above the cutoff
        CHECK(dtw_distance_bounded(a, b, kFull, exact * 0.5) >= exact * 0.5);
    }
}

TEST_CASE("nn1 hand cases and tie rule") {
    const LabeledDataset single = LabeledDataset::from(Tensor({1, 3}, {0, 0, 0}), {4});
    std::mt19937_64 gen(65);
    const auto query = random_series(3, gen);
    CHECK(nn1_classify(query, single, kFull) == 4);

    // training row identical to the query wins at distance 0
    LabeledDataset three = LabeledDataset::from(
        Tensor({3, 3}, {1, 2, 3, /**/ 5, 5, 5, /**/ 1, 2, 3}), {1, 2, 3});
    const std::vector<double> q = {1, 2, 3};
    CHECK(nn1_classify(q, three, kFull) == 1); // rows 0 and 2 tie at 0; lowest index

    // hand-verified argmin: query [0,1,1] is nearest to [0,0.9,1.1]
    LabeledDataset toy3 = LabeledDataset::from(
        Tensor({3, 3}, {0, 0, 0, /**/ 0, 0.9, 1.1, /**/ 2, 2, 2}), {10, 20, 30});
    const std::vector<double> q2 = {0, 1, 1};
    // D(row0) = 0+1+1 = 2; D(row1) = 0 + 0.01 + min-path 0.01 -> 0.02; D(row2) >= 4
    CHECK(dtw_distance(q2, std::span<const double>(toy3.series.row(1), 3), kFull) ==
          doctest::Approx(0.02).epsilon(1e-12));
    CHECK(nn1_classify(q2, toy3, kFull) == 20);
}

TEST_CASE("baseline accuracy is 1 when test equals train") {
    const LabeledDataset data = toy::waves(5, 12, 66);
    CHECK(baseline_evaluate(data, data, kFull) == 1.0);
}

TEST_CASE("baseline is invariant to the thread count") {
    const LabeledDataset train_set = toy::smooth_classes(20, 16, 3, 67);
    const LabeledDataset test_set = toy::smooth_classes(33, 16, 3, 68);
    const auto p1 = baseline_predictions(train_set, test_set, kFull, 1);
    const auto p4 = baseline_predictions(train_set, test_set, kFull, 4);
    const auto p7 = baseline_predictions(train_set, test_set, kFull, 7);
    CHECK(p1 == p4);
    CHECK(p1 == p7);
    CHECK(baseline_evaluate(train_set, test_set, kFull, 1) ==
          baseline_evaluate(train_set, test_set, kFull, 4));
}

TEST_CASE("baseline rejects empty inputs") {
    const LabeledDataset data = toy::waves(3, 8, 69);
    LabeledDataset empty;
    CHECK_THROWS_AS(baseline_evaluate(empty, data, kFull), data_error);
    CHECK_THROWS_AS(baseline_evaluate(data, empty, kFull), data_error);
}
