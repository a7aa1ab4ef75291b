#include "srdcnn/report.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include <json.hpp>

namespace srdcnn {
namespace {

constexpr const char* kTableCitation =
    "Ukil, Jara and Marin, \"SRDCNN: Strongly Regularized Deep Convolution Neural Network "
    "Architecture for Time-series Sensor Signal Classification Tasks\", Table 3";

constexpr std::array<const char*, 5> kMethods = {"MLP", "DTW-R1-1NN", "BOSS", "COTE", "SRDCNN"};

constexpr std::array<const char*, 13> kDatasets = {
    "CBF",      "Coffee",   "LargeKitchenAppliances", "SmallKitchenAppliances", "Fish",
    "CricketX", "ChlorineConcentration", "Lightning2", "ItalyPowerDemand", "Haptics",
    "FordA",    "ECG200",   "MedicalImages",
};

// accuracy per dataset row, in kMethods order
constexpr std::array<std::array<double, 5>, 13> kAccuracies = {{
    {0.8677, 0.9933, 0.9980, 0.9980, 0.9989}, // CBF
    {0.9996, 0.9889, 0.9885, 0.9996, 1.0},    // Coffee
    {0.3565, 0.7965, 0.8366, 0.9000, 0.8520}, // LargeKitchenAppliances
    {0.3563, 0.6402, 0.7502, 0.7878, 0.7953}, // SmallKitchenAppliances
    {0.8647, 0.7632, 0.9687, 0.9622, 0.9492}, // Fish
    {0.4994, 0.7380, 0.7493, 0.8149, 0.8224}, // CricketX
    {0.8699, 0.6455, 0.6596, 0.7356, 0.5433}, // ChlorineConcentration
    {0.7021, 0.8229, 0.8100, 0.7847, 0.8251}, // Lightning2
    {0.9539, 0.9226, 0.8660, 0.9703, 0.9546}, // ItalyPowerDemand
    {0.4453, 0.3900, 0.4590, 0.5169, 0.5247}, // Haptics
    {0.7455, 0.5769, 0.9195, 0.9545, 0.9251}, // FordA
    {0.8294, 0.7987, 0.8905, 0.8729, 0.8791}, // ECG200
    {0.6657, 0.7411, 0.7146, 0.7850, 0.6693}, // MedicalImages
}};

std::vector<PublishedEntry> build_entries() {
    std::vector<PublishedEntry> entries;
    entries.reserve(kDatasets.size() * kMethods.size());
    for (std::size_t d = 0; d < kDatasets.size(); ++d) {
        for (std::size_t m = 0; m < kMethods.size(); ++m) {
            entries.push_back({kDatasets[d], kMethods[m], kAccuracies[d][m], kTableCitation});
        }
    }
    return entries;
}

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

constexpr const char* kEmptyCell = "—"; // measured-but-absent cells are never 0

std::string format_acc(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// column width in characters, not bytes (kEmptyCell is multi-byte UTF-8)
std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) {
        if ((c & 0xc0) != 0x80) ++w;
    }
    return w;
}

const MeasuredResult* find_measured(std::span<const MeasuredResult> measured, const std::string& dataset,
                                    const char* method) {
    for (const MeasuredResult& r : measured) {
        if (r.dataset == dataset && r.method == method) return &r;
    }
    return nullptr;
}

} // namespace

std::span<const PublishedEntry> published_results() {
    static const std::vector<PublishedEntry> entries = build_entries();
    return entries;
}

std::span<const char* const> published_methods() { return {kMethods.data(), kMethods.size()}; }

std::span<const char* const> published_datasets() { return {kDatasets.data(), kDatasets.size()}; }

std::optional<double> published_accuracy(const std::string& dataset, const std::string& method) {
    for (const PublishedEntry& e : published_results()) {
        if (dataset == e.dataset && method == e.method) return e.accuracy;
    }
    return std::nullopt;
}

std::optional<std::string> canonical_dataset_name(const std::string& name) {
    const std::string needle = lower(name);
    for (const char* dataset : kDatasets) {
        if (needle == lower(dataset)) return std::string(dataset);
    }
    return std::nullopt;
}

std::string render_report_json(std::span<const MeasuredResult> measured) {
    nlohmann::json rows = nlohmann::json::array();
    for (const PublishedEntry& e : published_results()) {
        rows.push_back({{"dataset", e.dataset},
                        {"source", "published"},
                        {"method", e.method},
                        {"accuracy", e.accuracy},
                        {"citation", e.citation}});
    }
    for (const MeasuredResult& r : measured) {
        rows.push_back({{"dataset", r.dataset},
                        {"source", "measured"},
                        {"method", r.method},
                        {"accuracy", r.accuracy},
                        {"citation", "measured"}});
    }
    return rows.dump(2) + "\n";
}

std::string render_text_table(std::span<const MeasuredResult> measured) {
    const std::array<std::string, 8> header = {"dataset",          "MLP",   "DTW-R1-1NN",
                                               "BOSS",             "COTE",  "SRDCNN(pub)",
                                               "SRDCNN(measured)", "DTW(measured)"};
    std::vector<std::array<std::string, 8>> rows;
    std::array<std::size_t, 5> best_counts{};

    for (std::size_t d = 0; d < kDatasets.size(); ++d) {
        std::array<std::string, 8> row;
        row[0] = kDatasets[d];
        const auto& acc = kAccuracies[d];
        const double best = *std::max_element(acc.begin(), acc.end());
        for (std::size_t m = 0; m < kMethods.size(); ++m) {
            row[m + 1] = format_acc(acc[m]);
            if (acc[m] == best) {
                row[m + 1] += "*";
                ++best_counts[m];
            }
        }
        const MeasuredResult* srdcnn = find_measured(measured, kDatasets[d], "SRDCNN");
        const MeasuredResult* dtw = find_measured(measured, kDatasets[d], "DTW-R1-1NN");
        row[6] = srdcnn ? format_acc(srdcnn->accuracy) : kEmptyCell;
        row[7] = dtw ? format_acc(dtw->accuracy) : kEmptyCell;
        rows.push_back(std::move(row));
    }

    std::array<std::string, 8> tally;
    tally[0] = "best count";
    for (std::size_t m = 0; m < kMethods.size(); ++m) tally[m + 1] = std::to_string(best_counts[m]);
    tally[6] = kEmptyCell;
    tally[7] = kEmptyCell;
    rows.push_back(std::move(tally));

    std::array<std::size_t, 8> widths{};
    for (std::size_t c = 0; c < header.size(); ++c) widths[c] = display_width(header[c]);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], display_width(row[c]));
    }

    std::ostringstream out;
    auto emit = [&](const std::array<std::string, 8>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "  " : "") << row[c] << std::string(widths[c] - display_width(row[c]), ' ');
        }
        out << "\n";
    };
    emit(header);
    for (std::size_t c = 0; c < widths.size(); ++c) {
        out << (c ? "  " : "") << std::string(widths[c], '-');
    }
    out << "\n";
    for (const auto& row : rows) emit(row);
    return out.str();
}

} // namespace srdcnn
