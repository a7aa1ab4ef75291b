#pragma once

#include <functional>
#include <string>
#include <vector>

#include "srdcnn/model.hpp"
#include "srdcnn/tensor.hpp"

namespace srdcnn {

// Central-difference certification of the analytic gradients.

struct GradReport {
    struct BlockReport {
        std::string name;
        double max_rel_err = 0.0;
        std::size_t checked = 0; // coordinates compared
        std::size_t skipped = 0; // L1-kink and below-noise coordinates
    };
    std::vector<BlockReport> blocks;
    double global_max = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// Central differences of a ~O(1) objective carry cancellation noise around
// |f|*eps/h ~ 1e-11; a coordinate whose analytic AND numeric gradients are
// both under this floor is zero up to measurement precision (conv biases
// feeding batch statistics are the textbook case: the mean subtraction
// cancels them exactly). Such coordinates are excluded from the error
// statistic; a wrong nonzero gradient on either side is never excluded.
inline constexpr double kGradZeroFloor = 1e-6;

// |a - b| / max(1e-8, |a| + |b|)
double relative_error(double a, double b);

// (f(x + h e_i) - f(x - h e_i)) / 2h per coordinate; throws numeric_error if
// f returns a non-finite value.
Tensor numeric_gradient(const std::function<double(const Tensor&)>& f, const Tensor& at, double h);

// Elementwise comparison of analytic vs numeric gradient blocks; `skip` (may
// be empty) flags coordinates to leave out of a block.
GradReport compare_grads(const std::vector<std::string>& names, const std::vector<Tensor>& analytic,
                         const std::vector<Tensor>& numeric,
                         const std::vector<std::vector<bool>>& skip, double threshold);

// Perturbs every trainable coordinate of the model and compares the central
// difference of the regularized cost against loss_and_grads. Coordinates of
// regularized blocks within 10h of zero are skipped (L1 subgradient kink).
// Requires a batch of at least 2 so BN runs on batch statistics; running
// stats are restored afterwards.
GradReport gradient_check(SrdcnnModel& model, const Tensor& batch,
                          const std::vector<std::size_t>& labels, const PenaltyConfig& cfg,
                          double threshold, double h = 1e-5);

} // namespace srdcnn
