#include "srdcnn/dataset.hpp"

#include <algorithm>

namespace srdcnn {

std::size_t LabeledDataset::class_index(long long original) const {
    const auto it = std::lower_bound(label_map.begin(), label_map.end(), original);
    if (it == label_map.end() || *it != original) {
        throw label_error("label " + std::to_string(original) + " is not in the label map");
    }
    return static_cast<std::size_t>(it - label_map.begin());
}

LabeledDataset LabeledDataset::from(Tensor series, std::vector<long long> labels) {
    if (series.rank() != 2) {
        throw dimension_error("dataset series must be [N,T], got " + series.shape_string());
    }
    if (series.extent(0) != labels.size()) {
        throw data_error("dataset has " + std::to_string(series.extent(0)) + " series but " +
                         std::to_string(labels.size()) + " labels");
    }
    LabeledDataset d;
    d.label_map = labels;
    std::sort(d.label_map.begin(), d.label_map.end());
    d.label_map.erase(std::unique(d.label_map.begin(), d.label_map.end()), d.label_map.end());
    d.series = std::move(series);
    d.labels = std::move(labels);
    return d;
}

} // namespace srdcnn
