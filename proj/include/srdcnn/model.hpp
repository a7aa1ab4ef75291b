#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "srdcnn/dataset.hpp"
#include "srdcnn/layers.hpp"
#include "srdcnn/regularization.hpp"
#include "srdcnn/tensor.hpp"

namespace srdcnn {

// Everything the training run needs. Values not listed here follow the
// defaults documented next to each field; kernel_sizes/filters/num_layers
// must stay consistent (validate()).
struct Hyperparameters {
    std::size_t epochs = 1000;
    std::size_t num_layers = 5;
    std::vector<std::size_t> kernel_sizes = {32, 16, 8, 4, 2}; // applied in this order
    std::vector<std::size_t> filters = {32, 32, 32, 32, 32};
    PenaltyConfig penalty; // alpha1 = 0.01, alpha2 = 0.02

    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_adam = 1e-8;

    // eps large enough that the 1/sqrt(var+eps) factor stays stable on
    // channels the L1 penalty drives toward zero variance; with 1e-5 the
    // running statistics cannot represent the train-time normalization and
    // eval accuracy collapses
    double bn_eps = 1e-3;
    double bn_momentum = 0.1;

    std::uint64_t seed = 0;
    std::size_t batch_cap = 16;     // batch size = min(round(N/divisor), cap), clamped to >= 1
    std::size_t batch_divisor = 10;

    void validate() const; // throws config_error
};

struct ConvBlock {
    ConvParams conv;
    BatchNormParams bn;
};

struct SrdcnnModel {
    std::vector<ConvBlock> blocks;     // conv -> BN -> ReLU, in order
    DenseParams dense;
    std::vector<long long> label_map;  // class index -> original label
    Hyperparameters hp;                // config snapshot
    std::size_t trained_length = 0;    // T the model was built for

    std::size_t num_classes() const { return dense.bias.extent(0); }
};

// Ordered view over the trainable blocks; `regularized` marks the blocks the
// elastic penalty applies to (conv and dense weights only).
struct ParamRef {
    std::string name;
    Tensor* tensor;
    bool regularized;
};
std::vector<ParamRef> trainable_params(SrdcnnModel& model);
std::size_t trainable_parameter_count(const SrdcnnModel& model);

// max(1, min(round(n_train/divisor), cap)), never exceeding n_train.
std::size_t compute_batch_size(std::size_t n_train, const Hyperparameters& hp);

// Fresh network: Glorot-uniform conv/dense weights (+-sqrt(6/(fan_in+fan_out))),
// zero biases, BN gamma=1 beta=0 with running stats (0, 1). Deterministic for
// a given seed. label_map starts as the identity [0, classes).
SrdcnnModel build_model(std::size_t classes, std::size_t length, const Hyperparameters& hp,
                        std::uint64_t seed);

struct ForwardCache {
    std::vector<Tensor> conv_inputs;      // input of conv block i
    std::vector<BatchNormCache> bn_caches;
    std::vector<Tensor> relu_inputs;      // BN output, needed for the ReLU mask
    Tensor dense_input;                   // GAP output [B, F]
    std::size_t time_length = 0;
};

struct ForwardResult {
    Tensor logits; // [B, C]
    ForwardCache cache; // populated in train mode only
};

// (conv -> BN -> ReLU) x L -> GAP -> dense. Train mode uses batch statistics
// (running stats for B == 1, see BatchNormCache::Kind::frozen_stats) and
// keeps the cache; eval mode accepts any time length. Training requires the
// batch length to equal trained_length.
ForwardResult forward(SrdcnnModel& model, const Tensor& batch, Mode mode);

// Eval-mode forward on a const model; bit-identical to forward(..., eval).
Tensor forward_eval(const SrdcnnModel& model, const Tensor& batch);

struct LossGrads {
    double data_loss = 0.0;        // J, softmax cross-entropy batch mean
    double l1_term = 0.0;          // alpha1 * sum of L1 penalties
    double l2_term = 0.0;          // alpha2 * sum of L2 penalties
    double regularized_cost = 0.0; // Jhat = J + l1_term + l2_term
    std::vector<Tensor> grads;     // same order as trainable_params
    std::size_t correct = 0;       // argmax hits on this batch
};
// Full forward/backward; penalty gradients are added to the regularized
// blocks, everything else gets the pure data gradient.
LossGrads loss_and_grads(SrdcnnModel& model, const Tensor& batch,
                         const std::vector<std::size_t>& labels, const PenaltyConfig& cfg);

struct EpochRecord {
    std::size_t epoch = 0;         // 1-based
    double data_loss = 0.0;        // mean J over the epoch's steps
    double l1_term = 0.0;
    double l2_term = 0.0;
    double regularized_cost = 0.0; // mean Jhat; always J + l1 + l2
    double train_accuracy = 0.0;   // fraction correct over the epoch's batches
    double seconds = 0.0;          // wall clock for the epoch
};

struct TrainingHistory {
    std::vector<EpochRecord> epochs;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

struct TrainResult {
    SrdcnnModel model;
    TrainingHistory history;
};

// Seeded-shuffle mini-batch Adam over the whole dataset. Deterministic for a
// given config and seed. on_epoch (optional) fires after every epoch so
// metrics can be streamed out incrementally.
TrainResult train(const LabeledDataset& dataset, const Hyperparameters& hp,
                  const EpochCallback& on_epoch = {});

// Eval-mode forward on a single series; ties break toward the lowest class
// index; returns the original label through label_map.
long long predict(const SrdcnnModel& model, const Tensor& series);

// Fraction of test instances with predict(x) == label.
double evaluate(const SrdcnnModel& model, const LabeledDataset& test);

} // namespace srdcnn
