#include "srdcnn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "srdcnn/kernels.hpp"

namespace srdcnn {
namespace {

void check_rank3(const Tensor& x, const char* who) {
    if (x.rank() != 3) {
        throw dimension_error(std::string(who) + " expects a [B,C,T] tensor, got " + x.shape_string());
    }
}

} // namespace

Tensor conv1d_forward(const Tensor& x, const ConvParams& p) {
    check_rank3(x, "conv1d_forward");
    const std::size_t batch = x.extent(0), cin = x.extent(1), t = x.extent(2);
    if (cin != p.in_channels()) {
        throw dimension_error("conv1d_forward channel mismatch: input " + x.shape_string() +
                              " vs weights " + p.weights.shape_string());
    }
    const std::size_t cout = p.out_channels(), k = p.kernel_size();
    const Tensor xp = pad1d(x, conv_pad_left(k), conv_pad_right(k));
    const auto& ops = kernels::active();

    Tensor out({batch, cout, t});
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t o = 0; o < cout; ++o) {
            double* orow = out.row(b, o);
            std::fill(orow, orow + t, p.bias[o]);
            const double* wrow = p.weights.row(o, 0);
            for (std::size_t c = 0; c < cin; ++c) {
                const double* xrow = xp.row(b, c);
                for (std::size_t kk = 0; kk < k; ++kk) {
                    ops.axpy(wrow[c * k + kk], xrow + kk, orow, t);
                }
            }
        }
    }
    return out;
}

ConvGrads conv1d_backward(const Tensor& x, const ConvParams& p, const Tensor& grad_out) {
    check_rank3(x, "conv1d_backward");
    const std::size_t batch = x.extent(0), cin = x.extent(1), t = x.extent(2);
    const std::size_t cout = p.out_channels(), k = p.kernel_size();
    if (cin != p.in_channels() || grad_out.rank() != 3 || grad_out.extent(0) != batch ||
        grad_out.extent(1) != cout || grad_out.extent(2) != t) {
        throw dimension_error("conv1d_backward shape mismatch: x " + x.shape_string() + ", weights " +
                              p.weights.shape_string() + ", grad_out " + grad_out.shape_string());
    }
    const std::size_t pad_l = conv_pad_left(k);
    const Tensor xp = pad1d(x, pad_l, conv_pad_right(k));
    const std::size_t tp = t + k - 1;
    const auto& ops = kernels::active();

    ConvGrads g{Tensor({batch, cin, t}), Tensor({cout, cin, k}), Tensor({cout})};
    Tensor gxp({batch, cin, tp});
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t o = 0; o < cout; ++o) {
            const double* gout = grad_out.row(b, o);
            g.grad_b[o] += ops.sum(gout, t);
            const double* wrow = p.weights.row(o, 0);
            double* gw = g.grad_w.row(o, 0);
            for (std::size_t c = 0; c < cin; ++c) {
                const double* xrow = xp.row(b, c);
                double* gxrow = gxp.row(b, c);
                for (std::size_t kk = 0; kk < k; ++kk) {
                    gw[c * k + kk] += ops.dot(gout, xrow + kk, t);
                    ops.axpy(wrow[c * k + kk], gout, gxrow + kk, t);
                }
            }
        }
    }
    // drop the padding columns
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t c = 0; c < cin; ++c) {
            const double* src = gxp.row(b, c) + pad_l;
            std::copy(src, src + t, g.grad_x.row(b, c));
        }
    }
    return g;
}

BatchNormResult batchnorm_forward(const Tensor& x, BatchNormParams& p, Mode mode) {
    check_rank3(x, "batchnorm_forward");
    const std::size_t batch = x.extent(0), channels = x.extent(1), t = x.extent(2);
    if (channels != p.channels()) {
        throw dimension_error("batchnorm_forward channel mismatch: input " + x.shape_string() + " vs " +
                              std::to_string(p.channels()) + " channels");
    }
    if (mode == Mode::eval) {
        return {batchnorm_eval(x, p), {}};
    }

    const std::size_t n = batch * t;
    if (n < 2) {
        throw degenerate_batch_error("batchnorm_forward needs batch*time >= 2 in train mode, got " +
                                     std::to_string(n));
    }
    const auto& ops = kernels::active();
    const double inv_n = 1.0 / static_cast<double>(n);

    BatchNormResult r{Tensor(x.shape()), {}};
    r.cache.kind = BatchNormCache::Kind::batch_stats;
    r.cache.xhat = Tensor(x.shape());
    r.cache.inv_std.resize(channels);

    for (std::size_t c = 0; c < channels; ++c) {
        double total = 0.0;
        for (std::size_t b = 0; b < batch; ++b) total += ops.sum(x.row(b, c), t);
        const double mean = total * inv_n;
        // two-pass population variance
        double sq = 0.0;
        for (std::size_t b = 0; b < batch; ++b) {
            const double* row = x.row(b, c);
            for (std::size_t i = 0; i < t; ++i) {
                const double d = row[i] - mean;
                sq += d * d;
            }
        }
        const double var = sq * inv_n;
        const double inv_std = 1.0 / std::sqrt(var + p.eps);
        r.cache.inv_std[c] = inv_std;

        for (std::size_t b = 0; b < batch; ++b) {
            // xhat = (x - mean) * inv_std, y = gamma * xhat + beta
            ops.affine(inv_std, -mean * inv_std, x.row(b, c), r.cache.xhat.row(b, c), t);
            ops.affine(p.gamma[c], p.beta[c], r.cache.xhat.row(b, c), r.y.row(b, c), t);
        }
        p.running_mean[c] = (1.0 - p.momentum) * p.running_mean[c] + p.momentum * mean;
        p.running_var[c] = (1.0 - p.momentum) * p.running_var[c] + p.momentum * var;
    }
    return r;
}

Tensor batchnorm_eval(const Tensor& x, const BatchNormParams& p) {
    check_rank3(x, "batchnorm_eval");
    const std::size_t batch = x.extent(0), channels = x.extent(1), t = x.extent(2);
    if (channels != p.channels()) {
        throw dimension_error("batchnorm_eval channel mismatch: input " + x.shape_string() + " vs " +
                              std::to_string(p.channels()) + " channels");
    }
    const auto& ops = kernels::active();
    Tensor y(x.shape());
    for (std::size_t c = 0; c < channels; ++c) {
        const double inv_std = 1.0 / std::sqrt(p.running_var[c] + p.eps);
        const double a = p.gamma[c] * inv_std;
        const double cst = p.beta[c] - a * p.running_mean[c];
        for (std::size_t b = 0; b < batch; ++b) {
            ops.affine(a, cst, x.row(b, c), y.row(b, c), t);
        }
    }
    return y;
}

BatchNormResult batchnorm_forward_frozen(const Tensor& x, const BatchNormParams& p) {
    check_rank3(x, "batchnorm_forward_frozen");
    const std::size_t batch = x.extent(0), channels = x.extent(1), t = x.extent(2);
    if (channels != p.channels()) {
        throw dimension_error("batchnorm_forward_frozen channel mismatch for " + x.shape_string());
    }
    const auto& ops = kernels::active();
    BatchNormResult r{Tensor(x.shape()), {}};
    r.cache.kind = BatchNormCache::Kind::frozen_stats;
    r.cache.xhat = Tensor(x.shape());
    r.cache.inv_std.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
        const double inv_std = 1.0 / std::sqrt(p.running_var[c] + p.eps);
        r.cache.inv_std[c] = inv_std;
        for (std::size_t b = 0; b < batch; ++b) {
            ops.affine(inv_std, -p.running_mean[c] * inv_std, x.row(b, c), r.cache.xhat.row(b, c), t);
            ops.affine(p.gamma[c], p.beta[c], r.cache.xhat.row(b, c), r.y.row(b, c), t);
        }
    }
    return r;
}

BatchNormGrads batchnorm_backward(const BatchNormCache& cache, const BatchNormParams& p,
                                  const Tensor& grad_out) {
    if (cache.kind != BatchNormCache::Kind::batch_stats) {
        throw usage_error("batchnorm_backward requires a train-mode (batch statistics) cache");
    }
    check_rank3(grad_out, "batchnorm_backward");
    if (!grad_out.same_shape(cache.xhat)) {
        throw dimension_error("batchnorm_backward grad_out " + grad_out.shape_string() +
                              " does not match cache " + cache.xhat.shape_string());
    }
    const std::size_t batch = grad_out.extent(0), channels = grad_out.extent(1), t = grad_out.extent(2);
    const std::size_t n = batch * t;
    const double inv_n = 1.0 / static_cast<double>(n);
    const auto& ops = kernels::active();

    BatchNormGrads g{Tensor(grad_out.shape()), Tensor({channels}), Tensor({channels})};
    for (std::size_t c = 0; c < channels; ++c) {
        double sum_g = 0.0, sum_gx = 0.0;
        for (std::size_t b = 0; b < batch; ++b) {
            sum_g += ops.sum(grad_out.row(b, c), t);
            sum_gx += ops.dot(grad_out.row(b, c), cache.xhat.row(b, c), t);
        }
        g.grad_beta[c] = sum_g;
        g.grad_gamma[c] = sum_gx;
        // d/dx of gamma*xhat + beta through the batch mean and variance:
        // grad_x = gamma*inv_std * (g - mean(g) - xhat * mean(g*xhat))
        const double a = p.gamma[c] * cache.inv_std[c];
        const double mg = sum_g * inv_n;
        const double mgx = sum_gx * inv_n;
        for (std::size_t b = 0; b < batch; ++b) {
            const double* grow = grad_out.row(b, c);
            const double* xh = cache.xhat.row(b, c);
            double* out = g.grad_x.row(b, c);
            for (std::size_t i = 0; i < t; ++i) {
                out[i] = a * (grow[i] - mg - xh[i] * mgx);
            }
        }
    }
    return g;
}

BatchNormGrads batchnorm_frozen_backward(const BatchNormCache& cache, const BatchNormParams& p,
                                         const Tensor& grad_out) {
    if (cache.kind != BatchNormCache::Kind::frozen_stats) {
        throw usage_error("batchnorm_frozen_backward requires a frozen-statistics cache");
    }
    if (!grad_out.same_shape(cache.xhat)) {
        throw dimension_error("batchnorm_frozen_backward grad_out " + grad_out.shape_string() +
                              " does not match cache " + cache.xhat.shape_string());
    }
    const std::size_t batch = grad_out.extent(0), channels = grad_out.extent(1), t = grad_out.extent(2);
    const auto& ops = kernels::active();

    BatchNormGrads g{Tensor(grad_out.shape()), Tensor({channels}), Tensor({channels})};
    for (std::size_t c = 0; c < channels; ++c) {
        double sum_g = 0.0, sum_gx = 0.0;
        const double a = p.gamma[c] * cache.inv_std[c];
        for (std::size_t b = 0; b < batch; ++b) {
            sum_g += ops.sum(grad_out.row(b, c), t);
            sum_gx += ops.dot(grad_out.row(b, c), cache.xhat.row(b, c), t);
            ops.affine(a, 0.0, grad_out.row(b, c), g.grad_x.row(b, c), t);
        }
        g.grad_beta[c] = sum_g;
        g.grad_gamma[c] = sum_gx;
    }
    return g;
}

Tensor relu_forward(const Tensor& x) {
    Tensor y(x.shape());
    kernels::active().relu(x.data(), y.data(), x.size());
    return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
    if (!x.same_shape(grad_out)) {
        throw dimension_error("relu_backward shapes differ: " + x.shape_string() + " vs " +
                              grad_out.shape_string());
    }
    Tensor g(x.shape());
    kernels::active().relu_grad(x.data(), grad_out.data(), g.data(), x.size());
    return g;
}

Tensor gap_forward(const Tensor& x) {
    check_rank3(x, "gap_forward");
    return mean_axis(x, 2);
}

Tensor gap_backward(std::size_t t, const Tensor& grad_out) {
    if (grad_out.rank() != 2) {
        throw dimension_error("gap_backward expects [B,C] grad, got " + grad_out.shape_string());
    }
    const std::size_t batch = grad_out.extent(0), channels = grad_out.extent(1);
    Tensor g({batch, channels, t});
    const double inv_t = 1.0 / static_cast<double>(t);
    for (std::size_t b = 0; b < batch; ++b) {
        for (std::size_t c = 0; c < channels; ++c) {
            double* row = g.row(b, c);
            std::fill(row, row + t, grad_out(b, c) * inv_t);
        }
    }
    return g;
}

Tensor dense_forward(const Tensor& x, const DenseParams& p) {
    if (x.rank() != 2 || x.extent(1) != p.weights.extent(0)) {
        throw dimension_error("dense_forward shape mismatch: input " + x.shape_string() + " vs weights " +
                              p.weights.shape_string());
    }
    Tensor out = matmul(x, p.weights);
    const std::size_t batch = out.extent(0), classes = out.extent(1);
    for (std::size_t b = 0; b < batch; ++b) {
        kernels::active().axpy(1.0, p.bias.data(), out.row(b), classes);
    }
    return out;
}

DenseGrads dense_backward(const Tensor& x, const DenseParams& p, const Tensor& grad_out) {
    const std::size_t features = p.weights.extent(0), classes = p.weights.extent(1);
    if (x.rank() != 2 || x.extent(1) != features || grad_out.rank() != 2 ||
        grad_out.extent(0) != x.extent(0) || grad_out.extent(1) != classes) {
        throw dimension_error("dense_backward shape mismatch: x " + x.shape_string() + ", weights " +
                              p.weights.shape_string() + ", grad_out " + grad_out.shape_string());
    }
    const std::size_t batch = x.extent(0);
    const auto& ops = kernels::active();

    DenseGrads g{Tensor({batch, features}), Tensor({features, classes}), Tensor({classes})};
    for (std::size_t b = 0; b < batch; ++b) {
        const double* grow = grad_out.row(b);
        ops.axpy(1.0, grow, g.grad_b.data(), classes);
        for (std::size_t f = 0; f < features; ++f) {
            g.grad_x(b, f) = ops.dot(grow, p.weights.row(f), classes);
            ops.axpy(x(b, f), grow, g.grad_w.row(f), classes);
        }
    }
    return g;
}

SoftmaxXentResult softmax_xent(const Tensor& logits, const std::vector<std::size_t>& labels) {
    if (logits.rank() != 2) {
        throw dimension_error("softmax_xent expects [B,C] logits, got " + logits.shape_string());
    }
    const std::size_t batch = logits.extent(0), classes = logits.extent(1);
    if (labels.size() != batch) {
        throw dimension_error("softmax_xent got " + std::to_string(labels.size()) + " labels for batch " +
                              std::to_string(batch));
    }
    SoftmaxXentResult r;
    r.probs = Tensor(logits.shape());
    r.grad_logits = Tensor(logits.shape());
    const double inv_b = 1.0 / static_cast<double>(batch);

    double loss = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        if (labels[b] >= classes) {
            throw label_error("label " + std::to_string(labels[b]) + " out of range [0, " +
                              std::to_string(classes) + ")");
        }
        const double* row = logits.row(b);
        const double m = *std::max_element(row, row + classes);
        double z = 0.0;
        double* prow = r.probs.row(b);
        for (std::size_t c = 0; c < classes; ++c) {
            prow[c] = std::exp(row[c] - m);
            z += prow[c];
        }
        const double inv_z = 1.0 / z;
        double* grow = r.grad_logits.row(b);
        for (std::size_t c = 0; c < classes; ++c) {
            prow[c] *= inv_z;
            grow[c] = prow[c] * inv_b;
        }
        grow[labels[b]] -= inv_b;
        loss -= std::log(prow[labels[b]]);
    }
    r.loss = loss * inv_b;
    return r;
}

} // namespace srdcnn
