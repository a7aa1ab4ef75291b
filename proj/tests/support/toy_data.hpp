#pragma once

// Deterministic synthetic datasets for training tests.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "srdcnn/dataset.hpp"
#include "srdcnn/rng.hpp"

namespace toy {

inline constexpr double kPi = 3.14159265358979323846;

// per_class sine waves (label 1) vs per_class square waves (label 2) of unit
// amplitude, random phase and 1..3 cycles; separable by construction.
inline srdcnn::LabeledDataset waves(std::size_t per_class, std::size_t t, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const std::size_t n = 2 * per_class;
    srdcnn::Tensor series({n, t});
    std::vector<long long> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool square = i >= per_class;
        labels[i] = square ? 2 : 1;
        const double cycles = srdcnn::uniform_range(gen, 1.0, 3.0);
        const double phase = srdcnn::uniform_range(gen, 0.0, 2.0 * kPi);
        for (std::size_t j = 0; j < t; ++j) {
            const double v =
                std::sin(2.0 * kPi * cycles * static_cast<double>(j) / static_cast<double>(t) + phase);
            series(i, j) = square ? (v >= 0.0 ? 1.0 : -1.0) : v;
        }
    }
    return srdcnn::LabeledDataset::from(std::move(series), std::move(labels));
}

// Smooth per-class template plus noise; used to exercise the pipeline at
// realistic dataset scales without pretending to be archive data.
inline srdcnn::LabeledDataset smooth_classes(std::size_t n, std::size_t t, std::size_t classes,
                                             std::uint64_t seed, std::uint64_t template_seed = 42) {
    std::mt19937_64 tgen(template_seed);
    srdcnn::Tensor templates({classes, t});
    for (std::size_t c = 0; c < classes; ++c) {
        double level = 0.0;
        for (std::size_t j = 0; j < t; ++j) {
            level = 0.8 * level + srdcnn::uniform_range(tgen, -1.0, 1.0);
            templates(c, j) = level;
        }
    }
    std::mt19937_64 gen(seed);
    srdcnn::Tensor series({n, t});
    std::vector<long long> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i % classes;
        labels[i] = static_cast<long long>(c + 1);
        for (std::size_t j = 0; j < t; ++j) {
            series(i, j) = templates(c, j) + 0.4 * srdcnn::uniform_range(gen, -1.0, 1.0);
        }
    }
    return srdcnn::LabeledDataset::from(std::move(series), std::move(labels));
}

// UCR-format dump (label-first, comma separated, full precision)
inline void write_ucr(const std::filesystem::path& path, const srdcnn::LabeledDataset& d) {
    std::ofstream out(path, std::ios::trunc);
    char buf[32];
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << d.labels[i];
        for (std::size_t j = 0; j < d.length(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", d.series(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

} // namespace toy
