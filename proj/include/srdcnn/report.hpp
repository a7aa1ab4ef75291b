#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace srdcnn {

// Published reference accuracies, shipped as versioned constants with a
// citation per value; never recomputed. Methods: MLP, DTW-R1-1NN, BOSS,
// COTE, SRDCNN.
struct PublishedEntry {
    const char* dataset;
    const char* method;
    double accuracy;
    const char* citation;
};

inline constexpr int kPublishedTableVersion = 1;

std::span<const PublishedEntry> published_results();
std::span<const char* const> published_methods();  // column order
std::span<const char* const> published_datasets(); // row order

// nullopt if the (dataset, method) pair is not in the table
std::optional<double> published_accuracy(const std::string& dataset, const std::string& method);

// case-insensitive match against the published dataset names
std::optional<std::string> canonical_dataset_name(const std::string& name);

struct MeasuredResult {
    std::string dataset;
    std::string method; // "SRDCNN" or "DTW-R1-1NN"
    double accuracy = 0.0;
};

// Report JSON: array of {dataset, source: "published"|"measured", method,
// accuracy, citation}, published rows first. Returned serialized with
// 2-space indentation.
std::string render_report_json(std::span<const MeasuredResult> measured);

// Aligned text table over the full published grid: columns dataset, MLP,
// DTW-R1-1NN, BOSS, COTE, SRDCNN (published), SRDCNN (measured),
// DTW (measured). The best published value per row is starred and tallied in
// a closing "best count" row; missing measured cells render as "-".
std::string render_text_table(std::span<const MeasuredResult> measured);

} // namespace srdcnn
