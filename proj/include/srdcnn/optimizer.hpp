#pragma once

#include <cstdint>
#include <vector>

#include "srdcnn/tensor.hpp"

namespace srdcnn {

// Adam with bias correction. One state owns the moment estimates for an
// ordered list of parameter blocks; steps are sequential.
struct AdamState {
    std::vector<Tensor> m; // first moments, one per block
    std::vector<Tensor> v; // second moments (elementwise >= 0)
    std::uint64_t t = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState init(const std::vector<Tensor*>& params, double lr, double beta1, double beta2,
                          double eps);
};

// t <- t+1; m <- b1*m + (1-b1)g; v <- b2*v + (1-b2)g^2;
// theta <- theta - lr * mhat / (sqrt(vhat) + eps).
// `grads` must already carry any penalty contribution.
void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state);

// One L2-regularized gradient step in weight-decay form:
//   w <- (1 - lr*alpha2) * w - lr * grad
// Returns false (decay factor nonpositive, a warning-level condition) when
// lr*alpha2 >= 1; the update is still applied.
bool sgd_l2_step(Tensor& params, const Tensor& data_grads, double lr, double alpha2);

} // namespace srdcnn
