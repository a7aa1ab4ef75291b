#include "srdcnn/optimizer.hpp"

#include <cmath>

#include "srdcnn/kernels.hpp"

namespace srdcnn {

AdamState AdamState::init(const std::vector<Tensor*>& params, double lr, double beta1, double beta2,
                          double eps) {
    AdamState s;
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const Tensor* p : params) {
        s.m.emplace_back(p->shape());
        s.v.emplace_back(p->shape());
    }
    return s;
}

void adam_step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw dimension_error("adam_step block count mismatch: " + std::to_string(params.size()) +
                              " params, " + std::to_string(grads.size()) + " grads, " +
                              std::to_string(state.m.size()) + " state blocks");
    }
    state.t += 1;
    const double inv_bc1 = 1.0 / (1.0 - std::pow(state.beta1, static_cast<double>(state.t)));
    const double inv_bc2 = 1.0 / (1.0 - std::pow(state.beta2, static_cast<double>(state.t)));
    const auto& ops = kernels::active();
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const Tensor& g = *grads[i];
        if (!p.same_shape(g) || !p.same_shape(state.m[i])) {
            throw dimension_error("adam_step shape mismatch in block " + std::to_string(i) + ": param " +
                                  p.shape_string() + " vs grad " + g.shape_string());
        }
        ops.adam_update(p.data(), g.data(), state.m[i].data(), state.v[i].data(), p.size(), state.lr,
                        state.beta1, state.beta2, inv_bc1, inv_bc2, state.eps);
    }
}

bool sgd_l2_step(Tensor& params, const Tensor& data_grads, double lr, double alpha2) {
    if (!params.same_shape(data_grads)) {
        throw dimension_error("sgd_l2_step shape mismatch: " + params.shape_string() + " vs " +
                              data_grads.shape_string());
    }
    const double decay = 1.0 - lr * alpha2;
    double* w = params.data();
    const double* g = data_grads.data();
    for (std::size_t i = 0; i < params.size(); ++i) {
        w[i] = decay * w[i] - lr * g[i];
    }
    return decay > 0.0;
}

} // namespace srdcnn
