#pragma once

#include <cstddef>
#include <span>

#include "srdcnn/dataset.hpp"

namespace srdcnn {

// Full-window DTW ("R1") plus a 1-nearest-neighbor classifier.
struct DtwConfig {
    double window = 1.0; // warping-window fraction of max(m, n); 1.0 = unconstrained
    bool squared = true; // local cost (a-b)^2; false uses |a-b|
};

// Dynamic program over the m x n grid with the Sakoe-Chiba band
// |i - j| <= ceil(window * max(m, n)), widened to |m - n| so the end cell is
// always reachable. Accumulated cost is returned as-is (no square root).
double dtw_distance(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg);

// Same DP, abandoning as soon as every cell of a row reaches `cutoff`; the
// return value is then some number >= cutoff. Exact when cutoff = +inf.
double dtw_distance_bounded(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg,
                            double cutoff);

// Label of the training instance nearest to the query; ties break toward the
// lowest training-row index.
long long nn1_classify(std::span<const double> query, const LabeledDataset& train, const DtwConfig& cfg);

// 1-NN accuracy over the test set. Queries are independent, so fanning out
// over `threads` (0 = hardware concurrency) cannot change the result.
double baseline_evaluate(const LabeledDataset& train, const LabeledDataset& test, const DtwConfig& cfg,
                         unsigned threads = 0);

// The per-query predictions behind baseline_evaluate, for determinism checks.
std::vector<long long> baseline_predictions(const LabeledDataset& train, const LabeledDataset& test,
                                            const DtwConfig& cfg, unsigned threads = 0);

} // namespace srdcnn
