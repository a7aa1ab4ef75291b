#include "srdcnn/regularization.hpp"

#include "srdcnn/kernels.hpp"

namespace srdcnn {

double l2_penalty(const double* w, std::size_t n) { return 0.5 * kernels::active().sum_sq(w, n); }

double l1_penalty(const double* w, std::size_t n) { return kernels::active().sum_abs(w, n); }

double elastic_penalty(const double* w, std::size_t n, const PenaltyConfig& cfg) {
    return cfg.alpha1 * l1_penalty(w, n) + cfg.alpha2 * l2_penalty(w, n);
}

void add_elastic_grad(const double* w, double* grad, std::size_t n, const PenaltyConfig& cfg) {
    for (std::size_t i = 0; i < n; ++i) {
        const double sign = w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0);
        grad[i] += cfg.alpha1 * sign + cfg.alpha2 * w[i];
    }
}

Tensor elastic_grad(const Tensor& w, const PenaltyConfig& cfg) {
    Tensor g(w.shape());
    add_elastic_grad(w.data(), g.data(), w.size(), cfg);
    return g;
}

} // namespace srdcnn
