#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "srdcnn/errors.hpp"

namespace srdcnn {

// Dense row-major tensor of 64-bit reals. The last axis varies fastest, so
// [batch, channel, time] activations keep the time axis contiguous for the
// kernel inner loops. No views, no strides, no broadcasting.
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);
    Tensor(std::initializer_list<std::size_t> shape) : Tensor(std::vector<std::size_t>(shape)) {}

    static Tensor full(std::vector<std::size_t> shape, double value);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t extent(std::size_t axis) const;
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }

    double& operator[](std::size_t flat) { return data_[flat]; }
    double operator[](std::size_t flat) const { return data_[flat]; }

    double& operator()(std::size_t i) { return data_[i]; }
    double operator()(std::size_t i) const { return data_[i]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    // Pointer to the start of row j of item i (rank-3) or row i (rank-2).
    double* row(std::size_t i, std::size_t j) { return data_.data() + (i * shape_[1] + j) * shape_[2]; }
    const double* row(std::size_t i, std::size_t j) const {
        return data_.data() + (i * shape_[1] + j) * shape_[2];
    }
    double* row(std::size_t i) { return data_.data() + i * shape_[1]; }
    const double* row(std::size_t i) const { return data_.data() + i * shape_[1]; }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool all_finite() const;
    void fill(double value);

    std::string shape_string() const;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

std::string shape_string(const std::vector<std::size_t>& shape);

// c[i][j] = sum_k a[i][k] * b[k][j]; throws dimension_error naming both shapes.
Tensor matmul(const Tensor& a, const Tensor& b);

// Zero-pad the time (last) axis of a [C, T] or [B, C, T] tensor.
Tensor pad1d(const Tensor& x, std::size_t left, std::size_t right);

// Arithmetic mean along `axis`; result rank drops by one.
Tensor mean_axis(const Tensor& x, std::size_t axis);

} // namespace srdcnn
