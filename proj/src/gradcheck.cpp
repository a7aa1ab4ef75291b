#include "srdcnn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace srdcnn {

double relative_error(double a, double b) {
    return std::fabs(a - b) / std::max(1e-8, std::fabs(a) + std::fabs(b));
}

Tensor numeric_gradient(const std::function<double(const Tensor&)>& f, const Tensor& at, double h) {
    if (h <= 0.0) throw config_error("finite-difference step must be positive");
    Tensor point = at;
    Tensor grad(at.shape());
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double saved = point[i];
        point[i] = saved + h;
        const double plus = f(point);
        point[i] = saved - h;
        const double minus = f(point);
        point[i] = saved;
        if (!std::isfinite(plus) || !std::isfinite(minus)) {
            throw numeric_error("objective returned a non-finite value during differentiation");
        }
        grad[i] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

GradReport compare_grads(const std::vector<std::string>& names, const std::vector<Tensor>& analytic,
                         const std::vector<Tensor>& numeric,
                         const std::vector<std::vector<bool>>& skip, double threshold) {
    if (names.size() != analytic.size() || names.size() != numeric.size()) {
        throw dimension_error("compare_grads block count mismatch");
    }
    GradReport report;
    report.threshold = threshold;
    for (std::size_t blk = 0; blk < names.size(); ++blk) {
        if (!analytic[blk].same_shape(numeric[blk])) {
            throw dimension_error("compare_grads shape mismatch in block " + names[blk]);
        }
        GradReport::BlockReport br;
        br.name = names[blk];
        for (std::size_t i = 0; i < analytic[blk].size(); ++i) {
            if (blk < skip.size() && !skip[blk].empty() && skip[blk][i]) {
                ++br.skipped;
                continue;
            }
            if (std::fabs(analytic[blk][i]) < kGradZeroFloor &&
                std::fabs(numeric[blk][i]) < kGradZeroFloor) {
                ++br.skipped;
                continue;
            }
            br.max_rel_err = std::max(br.max_rel_err, relative_error(analytic[blk][i], numeric[blk][i]));
            ++br.checked;
        }
        report.global_max = std::max(report.global_max, br.max_rel_err);
        report.blocks.push_back(std::move(br));
    }
    report.pass = report.global_max < threshold;
    return report;
}

GradReport gradient_check(SrdcnnModel& model, const Tensor& batch,
                          const std::vector<std::size_t>& labels, const PenaltyConfig& cfg,
                          double threshold, double h) {
    if (batch.rank() != 3 || batch.extent(0) < 2) {
        throw usage_error("gradient_check needs a [B,1,T] batch with B >= 2 for batch statistics");
    }

    // running stats drift with every train-mode forward; save and restore
    std::vector<std::pair<Tensor, Tensor>> saved_stats;
    for (const ConvBlock& blk : model.blocks) {
        saved_stats.emplace_back(blk.bn.running_mean, blk.bn.running_var);
    }

    LossGrads analytic = loss_and_grads(model, batch, labels, cfg);

    auto cost = [&]() {
        ForwardResult fwd = forward(model, batch, Mode::train);
        double value = softmax_xent(fwd.logits, labels).loss;
        for (const ConvBlock& blk : model.blocks) value += elastic_penalty(blk.conv.weights, cfg);
        value += elastic_penalty(model.dense.weights, cfg);
        if (!std::isfinite(value)) {
            throw numeric_error("regularized cost became non-finite during gradient check");
        }
        return value;
    };

    std::vector<ParamRef> refs = trainable_params(model);
    std::vector<std::string> names;
    std::vector<Tensor> numeric;
    std::vector<std::vector<bool>> skip;
    for (const ParamRef& ref : refs) {
        names.push_back(ref.name);
        Tensor grad(ref.tensor->shape());
        std::vector<bool> skipped(ref.tensor->size(), false);
        for (std::size_t i = 0; i < ref.tensor->size(); ++i) {
            double& coord = (*ref.tensor)[i];
            if (ref.regularized && cfg.alpha1 > 0.0 && std::fabs(coord) < 10.0 * h) {
                skipped[i] = true; // |w| near the L1 kink; central differences straddle it
                continue;
            }
            const double saved = coord;
            coord = saved + h;
            const double plus = cost();
            coord = saved - h;
            const double minus = cost();
            coord = saved;
            grad[i] = (plus - minus) / (2.0 * h);
        }
        numeric.push_back(std::move(grad));
        skip.push_back(std::move(skipped));
    }

    for (std::size_t i = 0; i < model.blocks.size(); ++i) {
        model.blocks[i].bn.running_mean = saved_stats[i].first;
        model.blocks[i].bn.running_var = saved_stats[i].second;
    }
    return compare_grads(names, analytic.grads, numeric, skip, threshold);
}

} // namespace srdcnn
