#include "srdcnn/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace srdcnn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double local_cost(double a, double b, bool squared) {
    const double d = a - b;
    return squared ? d * d : std::fabs(d);
}

double dtw_impl(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg,
                double cutoff) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0 || n == 0) throw data_error("dtw_distance needs nonempty series");
    if (cfg.window < 0.0 || cfg.window > 1.0) {
        throw config_error("warping window must lie in [0, 1], got " + std::to_string(cfg.window));
    }

    const std::size_t longest = std::max(m, n);
    std::size_t band = static_cast<std::size_t>(std::ceil(cfg.window * static_cast<double>(longest)));
    band = std::max(band, m > n ? m - n : n - m); // keep the end cell reachable

    // rolling rows over j = 0..n-1; cells outside the band stay +inf
    std::vector<double> prev(n, kInf), curr(n, kInf);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j_lo = i > band ? i - band : 0;
        const std::size_t j_hi = std::min(n - 1, i + band);
        std::fill(curr.begin(), curr.end(), kInf);
        double row_min = kInf;
        for (std::size_t j = j_lo; j <= j_hi; ++j) {
            const double cost = local_cost(a[i], b[j], cfg.squared);
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                best = j > 0 ? curr[j - 1] : kInf;           // insertion
                if (i > 0) {
                    best = std::min(best, prev[j]);          // deletion
                    if (j > 0) best = std::min(best, prev[j - 1]); // match
                }
            }
            curr[j] = cost + best;
            row_min = std::min(row_min, curr[j]);
        }
        if (row_min >= cutoff) return row_min; // cannot beat the cutoff anymore
        prev.swap(curr);
    }
    return prev[n - 1];
}

} // namespace

double dtw_distance(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg) {
    return dtw_impl(a, b, cfg, kInf);
}

double dtw_distance_bounded(std::span<const double> a, std::span<const double> b, const DtwConfig& cfg,
                            double cutoff) {
    return dtw_impl(a, b, cfg, cutoff);
}

long long nn1_classify(std::span<const double> query, const LabeledDataset& train, const DtwConfig& cfg) {
    const std::size_t n = train.size();
    if (n == 0) throw data_error("nn1_classify needs a nonempty training set");
    const std::size_t t = train.length();

    double best = kInf;
    std::size_t best_row = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<const double> candidate(train.series.row(i), t);
        // abandoning at `best` keeps the lowest-index tie rule intact: a later
        // row only wins by being strictly closer
        const double d = dtw_impl(query, candidate, cfg, best);
        if (d < best) {
            best = d;
            best_row = i;
        }
    }
    return train.labels[best_row];
}

std::vector<long long> baseline_predictions(const LabeledDataset& train, const LabeledDataset& test,
                                            const DtwConfig& cfg, unsigned threads) {
    if (train.labels.empty() || test.labels.empty()) {
        throw data_error("baseline_evaluate needs nonempty train and test sets");
    }
    const std::size_t n = test.size();
    const std::size_t t = test.length();
    std::vector<long long> predictions(n);

    unsigned worker_count = threads ? threads : std::thread::hardware_concurrency();
    worker_count = std::max(1u, std::min<unsigned>(worker_count, static_cast<unsigned>(n)));

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t q = lo; q < hi; ++q) {
            predictions[q] = nn1_classify(std::span<const double>(test.series.row(q), t), train, cfg);
        }
    };
    if (worker_count == 1) {
        run_range(0, n);
        return predictions;
    }
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    const std::size_t chunk = (n + worker_count - 1) / worker_count;
    for (unsigned w = 0; w < worker_count; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back(run_range, lo, hi);
    }
    for (std::thread& worker : workers) worker.join();
    return predictions;
}

double baseline_evaluate(const LabeledDataset& train, const LabeledDataset& test, const DtwConfig& cfg,
                         unsigned threads) {
    const std::vector<long long> predictions = baseline_predictions(train, test, cfg, threads);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] == test.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

} // namespace srdcnn
