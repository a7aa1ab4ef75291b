#pragma once

#include <cstddef>
#include <vector>

#include "srdcnn/tensor.hpp"

namespace srdcnn {

enum class Mode { train, eval };

// -------------------------------------------------------------------------
// parameter blocks
// -------------------------------------------------------------------------

struct ConvParams {
    Tensor weights; // [Cout, Cin, K]
    Tensor bias;    // [Cout]

    std::size_t out_channels() const { return weights.extent(0); }
    std::size_t in_channels() const { return weights.extent(1); }
    std::size_t kernel_size() const { return weights.extent(2); }
};

struct BatchNormParams {
    Tensor gamma;        // [C]
    Tensor beta;         // [C]
    Tensor running_mean; // [C]
    Tensor running_var;  // [C]
    double eps = 1e-3;
    double momentum = 0.1;

    std::size_t channels() const { return gamma.extent(0); }
};

struct DenseParams {
    Tensor weights; // [F, C]
    Tensor bias;    // [C]
};

// -------------------------------------------------------------------------
// convolution, "same" zero padding, stride 1, cross-correlation convention
// -------------------------------------------------------------------------

// Left-biased centering: pad_left = (K-1)/2, pad_right = K-1-pad_left, so the
// output time length always equals the input's, including K > T.
inline std::size_t conv_pad_left(std::size_t k) { return (k - 1) / 2; }
inline std::size_t conv_pad_right(std::size_t k) { return k - 1 - conv_pad_left(k); }

Tensor conv1d_forward(const Tensor& x, const ConvParams& p); // [B,Cin,T] -> [B,Cout,T]

struct ConvGrads {
    Tensor grad_x; // [B, Cin, T]
    Tensor grad_w; // [Cout, Cin, K]
    Tensor grad_b; // [Cout]
};
ConvGrads conv1d_backward(const Tensor& x, const ConvParams& p, const Tensor& grad_out);

// -------------------------------------------------------------------------
// batch normalization over (batch, time) per channel
// -------------------------------------------------------------------------

struct BatchNormCache {
    enum class Kind {
        none,        // eval-mode forward keeps nothing
        batch_stats, // train mode: normalized by batch statistics
        frozen_stats // normalized by running statistics but gradients wanted
    };
    Kind kind = Kind::none;
    Tensor xhat;                 // [B, C, T]
    std::vector<double> inv_std; // per channel, matching `kind`

    bool empty() const { return kind == Kind::none; }
};

struct BatchNormResult {
    Tensor y;
    BatchNormCache cache;
};

// Train mode computes population (divide-by-n) statistics over (batch, time),
// normalizes with them and updates running stats as
// running <- (1-momentum)*running + momentum*batch_stat. Requires B*T >= 2 per
// channel. Eval mode normalizes with running stats and returns an empty cache.
BatchNormResult batchnorm_forward(const Tensor& x, BatchNormParams& p, Mode mode);

// Normalizes with running statistics (like eval) but returns a cache that
// batchnorm_frozen_backward accepts; the training loop uses this for batches
// of size 1, whose batch variance would be degenerate.
BatchNormResult batchnorm_forward_frozen(const Tensor& x, const BatchNormParams& p);

// The eval-mode normalization on its own: running stats, no cache, const
// params. batchnorm_forward's eval branch routes through this, so the two
// are bit-identical.
Tensor batchnorm_eval(const Tensor& x, const BatchNormParams& p);

struct BatchNormGrads {
    Tensor grad_x;
    Tensor grad_gamma;
    Tensor grad_beta;
};

// Exact gradients through the batch mean/variance pathways. Only accepts a
// batch_stats cache; anything else is a usage_error.
BatchNormGrads batchnorm_backward(const BatchNormCache& cache, const BatchNormParams& p,
                                  const Tensor& grad_out);

// Gradients when the normalization used fixed running statistics.
BatchNormGrads batchnorm_frozen_backward(const BatchNormCache& cache, const BatchNormParams& p,
                                         const Tensor& grad_out);

// -------------------------------------------------------------------------
// ReLU, global average pooling, dense head, softmax + cross-entropy
// -------------------------------------------------------------------------

Tensor relu_forward(const Tensor& x);
// grad at exactly 0 is 0 (inactive branch)
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

Tensor gap_forward(const Tensor& x);                               // [B,C,T] -> [B,C]
Tensor gap_backward(std::size_t t, const Tensor& grad_out);        // [B,C] -> [B,C,T]

Tensor dense_forward(const Tensor& x, const DenseParams& p);       // [B,F] -> [B,C]

struct DenseGrads {
    Tensor grad_x; // [B, F]
    Tensor grad_w; // [F, C]
    Tensor grad_b; // [C]
};
DenseGrads dense_backward(const Tensor& x, const DenseParams& p, const Tensor& grad_out);

struct SoftmaxXentResult {
    double loss = 0.0;  // batch mean of -log p[label]
    Tensor grad_logits; // (probs - onehot) / B
    Tensor probs;
};
SoftmaxXentResult softmax_xent(const Tensor& logits, const std::vector<std::size_t>& labels);

} // namespace srdcnn
