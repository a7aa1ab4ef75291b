#pragma once

#include <filesystem>
#include <string>

#include "srdcnn/dataset.hpp"
#include "srdcnn/model.hpp"

namespace srdcnn {

// UCR-style text format: one instance per line, integer-valued label first,
// then the series values; fields split on commas or runs of whitespace/tabs.
// Ragged rows, non-numeric fields and non-integer labels are rejected with
// the offending line number.
LabeledDataset load_ucr(const std::filesystem::path& path);

// Per-series (x - mean) / std with population std; constant series (std below
// 1e-12) map to all zeros.
void znormalize_series(double* x, std::size_t n);
Tensor znormalize(const Tensor& series);        // rank-1
void znormalize(LabeledDataset& dataset);       // every row in place

// Self-describing JSON checkpoint: format_version, hyperparameters,
// label_map, trained_length and one {name, shape, data} entry per parameter
// block (BN running stats included). Doubles are written with shortest
// round-trip precision, so save -> load -> save is byte-identical and every
// parameter reloads bit-exactly.
inline constexpr int kCheckpointFormatVersion = 1;

void save_model(const SrdcnnModel& model, const std::filesystem::path& path);
SrdcnnModel load_model(const std::filesystem::path& path);

} // namespace srdcnn
