#pragma once

#include <cstddef>

#include "srdcnn/tensor.hpp"

namespace srdcnn {

// Elastic-net penalty factors. Applied to convolution and dense weights only;
// biases and the BN affine parameters are left unpenalized.
struct PenaltyConfig {
    double alpha1 = 0.01; // L1 factor
    double alpha2 = 0.02; // L2 factor
};

// w'w / 2, unscaled; the caller multiplies by alpha2.
double l2_penalty(const double* w, std::size_t n);

// sum |w_i|, unscaled.
double l1_penalty(const double* w, std::size_t n);

// alpha1 * sum|w| + alpha2 * w'w/2
double elastic_penalty(const double* w, std::size_t n, const PenaltyConfig& cfg);

// g_i = alpha1 * sign(w_i) + alpha2 * w_i, with sign(0) = 0 so exact zeros
// stay put under pure L1 pressure. Accumulates into grad.
void add_elastic_grad(const double* w, double* grad, std::size_t n, const PenaltyConfig& cfg);

inline double l2_penalty(const Tensor& w) { return l2_penalty(w.data(), w.size()); }
inline double l1_penalty(const Tensor& w) { return l1_penalty(w.data(), w.size()); }
inline double elastic_penalty(const Tensor& w, const PenaltyConfig& cfg) {
    return elastic_penalty(w.data(), w.size(), cfg);
}
Tensor elastic_grad(const Tensor& w, const PenaltyConfig& cfg);

} // namespace srdcnn
