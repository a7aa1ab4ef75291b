#include "srdcnn/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "srdcnn/optimizer.hpp"
#include "srdcnn/rng.hpp"

namespace srdcnn {
namespace {

// The shuffle stream is decoupled from the init stream so that build_model
// with the same seed stays reproducible on its own.
constexpr std::uint64_t kShuffleStreamSalt = 0x9e3779b97f4a7c15ULL;

void fill_glorot_uniform(Tensor& w, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& gen) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = uniform_range(gen, -limit, limit);
    }
}

std::size_t argmax_row(const double* row, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (row[i] > row[best]) best = i; // ties keep the lowest index
    }
    return best;
}

} // namespace

void Hyperparameters::validate() const {
    if (num_layers == 0 || kernel_sizes.size() != num_layers || filters.size() != num_layers) {
        throw config_error("hyperparameters need num_layers (" + std::to_string(num_layers) +
                           ") kernel sizes and filter counts; got " + std::to_string(kernel_sizes.size()) +
                           " and " + std::to_string(filters.size()));
    }
    for (std::size_t k : kernel_sizes) {
        if (k == 0) throw config_error("kernel sizes must be positive");
    }
    for (std::size_t f : filters) {
        if (f == 0) throw config_error("filter counts must be positive");
    }
    if (epochs == 0) throw config_error("epochs must be positive");
    if (batch_cap == 0 || batch_divisor == 0) throw config_error("batch cap/divisor must be positive");
    if (penalty.alpha1 < 0.0 || penalty.alpha2 < 0.0) throw config_error("penalty factors must be >= 0");
    if (lr <= 0.0) throw config_error("learning rate must be positive");
    if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0) {
        throw config_error("Adam betas must lie in (0, 1)");
    }
    if (bn_eps <= 0.0 || bn_momentum <= 0.0 || bn_momentum >= 1.0) {
        throw config_error("BN eps must be > 0 and momentum in (0, 1)");
    }
}

std::vector<ParamRef> trainable_params(SrdcnnModel& model) {
    std::vector<ParamRef> refs;
    refs.reserve(model.blocks.size() * 4 + 2);
    for (std::size_t i = 0; i < model.blocks.size(); ++i) {
        const std::string tag = std::to_string(i + 1);
        ConvBlock& blk = model.blocks[i];
        refs.push_back({"conv" + tag + ".weight", &blk.conv.weights, true});
        refs.push_back({"conv" + tag + ".bias", &blk.conv.bias, false});
        refs.push_back({"bn" + tag + ".gamma", &blk.bn.gamma, false});
        refs.push_back({"bn" + tag + ".beta", &blk.bn.beta, false});
    }
    refs.push_back({"dense.weight", &model.dense.weights, true});
    refs.push_back({"dense.bias", &model.dense.bias, false});
    return refs;
}

std::size_t trainable_parameter_count(const SrdcnnModel& model) {
    std::size_t n = 0;
    for (const ConvBlock& blk : model.blocks) {
        n += blk.conv.weights.size() + blk.conv.bias.size() + blk.bn.gamma.size() + blk.bn.beta.size();
    }
    return n + model.dense.weights.size() + model.dense.bias.size();
}

std::size_t compute_batch_size(std::size_t n_train, const Hyperparameters& hp) {
    if (n_train == 0) throw data_error("compute_batch_size needs a nonempty training set");
    const long rounded = std::lround(static_cast<double>(n_train) / static_cast<double>(hp.batch_divisor));
    std::size_t b = std::min<std::size_t>(rounded < 0 ? 0 : static_cast<std::size_t>(rounded), hp.batch_cap);
    b = std::max<std::size_t>(b, 1);
    return std::min(b, n_train);
}

SrdcnnModel build_model(std::size_t classes, std::size_t length, const Hyperparameters& hp,
                        std::uint64_t seed) {
    if (classes < 2) {
        throw config_error("a classifier needs at least 2 classes, got " + std::to_string(classes));
    }
    if (length == 0) throw config_error("series length must be positive");
    hp.validate();

    std::mt19937_64 gen(seed);
    SrdcnnModel model;
    model.hp = hp;
    model.hp.seed = seed;
    model.trained_length = length;
    model.blocks.reserve(hp.num_layers);

    std::size_t cin = 1;
    for (std::size_t i = 0; i < hp.num_layers; ++i) {
        const std::size_t cout = hp.filters[i], k = hp.kernel_sizes[i];
        ConvBlock blk;
        blk.conv.weights = Tensor({cout, cin, k});
        blk.conv.bias = Tensor({cout});
        fill_glorot_uniform(blk.conv.weights, cin * k, cout * k, gen);
        blk.bn.gamma = Tensor::full({cout}, 1.0);
        blk.bn.beta = Tensor({cout});
        blk.bn.running_mean = Tensor({cout});
        blk.bn.running_var = Tensor::full({cout}, 1.0);
        blk.bn.eps = hp.bn_eps;
        blk.bn.momentum = hp.bn_momentum;
        model.blocks.push_back(std::move(blk));
        cin = cout;
    }

    const std::size_t features = hp.filters.back();
    model.dense.weights = Tensor({features, classes});
    model.dense.bias = Tensor({classes});
    fill_glorot_uniform(model.dense.weights, features, classes, gen);

    model.label_map.resize(classes);
    std::iota(model.label_map.begin(), model.label_map.end(), 0);
    return model;
}

ForwardResult forward(SrdcnnModel& model, const Tensor& batch, Mode mode) {
    if (batch.rank() != 3 || batch.extent(1) != 1) {
        throw dimension_error("forward expects a [B,1,T] batch, got " + batch.shape_string());
    }
    if (mode == Mode::train && batch.extent(2) != model.trained_length) {
        throw dimension_error("training batch length " + std::to_string(batch.extent(2)) +
                              " != model length " + std::to_string(model.trained_length));
    }
    const bool keep_cache = mode == Mode::train;
    const std::size_t batch_n = batch.extent(0);

    ForwardResult r;
    r.cache.time_length = batch.extent(2);
    Tensor act = batch;
    for (ConvBlock& blk : model.blocks) {
        if (keep_cache) r.cache.conv_inputs.push_back(act);
        Tensor conv_out = conv1d_forward(act, blk.conv);
        if (mode == Mode::eval) {
            act = relu_forward(batchnorm_eval(conv_out, blk.bn));
        } else if (batch_n == 1) {
            // batch statistics are degenerate for a single instance
            BatchNormResult bn = batchnorm_forward_frozen(conv_out, blk.bn);
            r.cache.bn_caches.push_back(std::move(bn.cache));
            r.cache.relu_inputs.push_back(bn.y);
            act = relu_forward(bn.y);
        } else {
            BatchNormResult bn = batchnorm_forward(conv_out, blk.bn, Mode::train);
            r.cache.bn_caches.push_back(std::move(bn.cache));
            r.cache.relu_inputs.push_back(bn.y);
            act = relu_forward(bn.y);
        }
    }
    Tensor pooled = gap_forward(act);
    if (keep_cache) r.cache.dense_input = pooled;
    r.logits = dense_forward(pooled, model.dense);
    return r;
}

Tensor forward_eval(const SrdcnnModel& model, const Tensor& batch) {
    if (batch.rank() != 3 || batch.extent(1) != 1) {
        throw dimension_error("forward_eval expects a [B,1,T] batch, got " + batch.shape_string());
    }
    Tensor act = batch;
    for (const ConvBlock& blk : model.blocks) {
        act = relu_forward(batchnorm_eval(conv1d_forward(act, blk.conv), blk.bn));
    }
    return dense_forward(gap_forward(act), model.dense);
}

LossGrads loss_and_grads(SrdcnnModel& model, const Tensor& batch,
                         const std::vector<std::size_t>& labels, const PenaltyConfig& cfg) {
    ForwardResult fwd = forward(model, batch, Mode::train);
    SoftmaxXentResult sx = softmax_xent(fwd.logits, labels);

    const std::size_t layers = model.blocks.size();
    LossGrads out;
    out.data_loss = sx.loss;
    out.grads.resize(layers * 4 + 2);

    const std::size_t batch_n = batch.extent(0);
    const std::size_t classes = model.num_classes();
    for (std::size_t b = 0; b < batch_n; ++b) {
        if (argmax_row(sx.probs.row(b), classes) == labels[b]) ++out.correct;
    }

    DenseGrads dg = dense_backward(fwd.cache.dense_input, model.dense, sx.grad_logits);
    out.grads[layers * 4] = std::move(dg.grad_w);
    out.grads[layers * 4 + 1] = std::move(dg.grad_b);

    Tensor upstream = gap_backward(fwd.cache.time_length, dg.grad_x);
    for (std::size_t i = layers; i-- > 0;) {
        ConvBlock& blk = model.blocks[i];
        const Tensor relu_grad = relu_backward(fwd.cache.relu_inputs[i], upstream);
        const BatchNormCache& bn_cache = fwd.cache.bn_caches[i];
        BatchNormGrads bg = bn_cache.kind == BatchNormCache::Kind::batch_stats
                                ? batchnorm_backward(bn_cache, blk.bn, relu_grad)
                                : batchnorm_frozen_backward(bn_cache, blk.bn, relu_grad);
        ConvGrads cg = conv1d_backward(fwd.cache.conv_inputs[i], blk.conv, bg.grad_x);
        out.grads[i * 4] = std::move(cg.grad_w);
        out.grads[i * 4 + 1] = std::move(cg.grad_b);
        out.grads[i * 4 + 2] = std::move(bg.grad_gamma);
        out.grads[i * 4 + 3] = std::move(bg.grad_beta);
        upstream = std::move(cg.grad_x);
    }

    // elastic-net terms over the regularized blocks only
    for (std::size_t i = 0; i < layers; ++i) {
        const Tensor& w = model.blocks[i].conv.weights;
        out.l1_term += cfg.alpha1 * l1_penalty(w);
        out.l2_term += cfg.alpha2 * l2_penalty(w);
        add_elastic_grad(w.data(), out.grads[i * 4].data(), w.size(), cfg);
    }
    out.l1_term += cfg.alpha1 * l1_penalty(model.dense.weights);
    out.l2_term += cfg.alpha2 * l2_penalty(model.dense.weights);
    add_elastic_grad(model.dense.weights.data(), out.grads[layers * 4].data(),
                     model.dense.weights.size(), cfg);

    out.regularized_cost = out.data_loss + out.l1_term + out.l2_term;
    return out;
}

TrainResult train(const LabeledDataset& dataset, const Hyperparameters& hp,
                  const EpochCallback& on_epoch) {
    hp.validate();
    if (dataset.labels.empty()) throw data_error("cannot train on an empty dataset");
    const std::size_t n = dataset.size();
    if (dataset.num_classes() < 2) {
        throw config_error("training needs at least 2 classes, dataset has " +
                           std::to_string(dataset.num_classes()));
    }
    const std::size_t t = dataset.length();

    TrainResult result;
    result.model = build_model(dataset.num_classes(), t, hp, hp.seed);
    result.model.label_map = dataset.label_map;

    std::vector<std::size_t> class_idx(n);
    for (std::size_t i = 0; i < n; ++i) class_idx[i] = dataset.class_index(dataset.labels[i]);

    std::vector<Tensor*> params;
    for (ParamRef& ref : trainable_params(result.model)) params.push_back(ref.tensor);
    AdamState adam = AdamState::init(params, hp.lr, hp.beta1, hp.beta2, hp.eps_adam);

    const std::size_t batch_size = compute_batch_size(n, hp);
    std::mt19937_64 shuffle_gen(hp.seed ^ kShuffleStreamSalt);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    result.history.epochs.reserve(hp.epochs);
    for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
        const auto started = std::chrono::steady_clock::now();
        shuffle_indices(order, shuffle_gen);

        EpochRecord rec;
        rec.epoch = epoch;
        std::size_t correct = 0, steps = 0;
        for (std::size_t begin = 0; begin < n; begin += batch_size) {
            const std::size_t b = std::min(batch_size, n - begin);
            Tensor batch({b, 1, t});
            std::vector<std::size_t> labels(b);
            for (std::size_t i = 0; i < b; ++i) {
                const std::size_t src = order[begin + i];
                std::copy(dataset.series.row(src), dataset.series.row(src) + t, batch.row(i, 0));
                labels[i] = class_idx[src];
            }
            LossGrads lg = loss_and_grads(result.model, batch, labels, hp.penalty);
            std::vector<const Tensor*> grads;
            grads.reserve(lg.grads.size());
            for (const Tensor& g : lg.grads) grads.push_back(&g);
            adam_step(params, grads, adam);

            rec.data_loss += lg.data_loss;
            rec.l1_term += lg.l1_term;
            rec.l2_term += lg.l2_term;
            correct += lg.correct;
            ++steps;
        }
        const double inv_steps = 1.0 / static_cast<double>(steps);
        rec.data_loss *= inv_steps;
        rec.l1_term *= inv_steps;
        rec.l2_term *= inv_steps;
        rec.regularized_cost = rec.data_loss + rec.l1_term + rec.l2_term;
        rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        result.history.epochs.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    return result;
}

long long predict(const SrdcnnModel& model, const Tensor& series) {
    if (series.rank() != 1) {
        throw dimension_error("predict expects a rank-1 series, got " + series.shape_string());
    }
    Tensor batch({1, 1, series.extent(0)}, series.storage());
    const Tensor logits = forward_eval(model, batch);
    return model.label_map[argmax_row(logits.row(0), model.num_classes())];
}

double evaluate(const SrdcnnModel& model, const LabeledDataset& test) {
    if (test.labels.empty()) throw data_error("cannot evaluate on an empty test set");
    const std::size_t n = test.size();
    const std::size_t t = test.length();
    const std::size_t classes = model.num_classes();

    std::size_t correct = 0;
    constexpr std::size_t kChunk = 128;
    for (std::size_t begin = 0; begin < n; begin += kChunk) {
        const std::size_t b = std::min(kChunk, n - begin);
        Tensor batch({b, 1, t});
        for (std::size_t i = 0; i < b; ++i) {
            std::copy(test.series.row(begin + i), test.series.row(begin + i) + t, batch.row(i, 0));
        }
        const Tensor logits = forward_eval(model, batch);
        for (std::size_t i = 0; i < b; ++i) {
            const long long predicted = model.label_map[argmax_row(logits.row(i), classes)];
            if (predicted == test.labels[begin + i]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

} // namespace srdcnn
