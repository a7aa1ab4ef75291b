#pragma once

#include <cstdint>
#include <vector>

#include "srdcnn/tensor.hpp"

namespace srdcnn {

// N equal-length univariate series with integer class labels. label_map holds
// the sorted distinct original labels; its position is the class index used
// internally, so arbitrary label values (e.g. {-1, 1}) map onto [0, C).
struct LabeledDataset {
    Tensor series;                    // [N, T]
    std::vector<long long> labels;    // original labels, size N
    std::vector<long long> label_map; // class index -> original label, sorted ascending

    std::size_t size() const { return series.extent(0); }
    std::size_t length() const { return series.extent(1); }
    std::size_t num_classes() const { return label_map.size(); }

    // index of an original label; throws label_error if unknown
    std::size_t class_index(long long original) const;

    // builds the label map from the labels present; throws on inconsistency
    static LabeledDataset from(Tensor series, std::vector<long long> labels);
};

} // namespace srdcnn
