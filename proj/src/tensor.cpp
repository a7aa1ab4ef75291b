#include "srdcnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srdcnn/kernels.hpp"

namespace srdcnn {
namespace {

std::size_t checked_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) {
        if (e == 0) throw dimension_error("tensor extents must be positive, got " + srdcnn::shape_string(shape));
        n *= e;
    }
    return n;
}

} // namespace

std::string shape_string(const std::vector<std::size_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(checked_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data) : shape_(std::move(shape)) {
    if (checked_product(shape_) != data.size()) {
        throw dimension_error("data length " + std::to_string(data.size()) + " does not fill shape " +
                              srdcnn::shape_string(shape_));
    }
    data_ = std::move(data);
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
    Tensor t(std::move(shape));
    t.fill(value);
    return t;
}

std::size_t Tensor::extent(std::size_t axis) const {
    if (axis >= shape_.size()) {
        throw dimension_error("axis " + std::to_string(axis) + " out of range for shape " + srdcnn::shape_string(shape_));
    }
    return shape_[axis];
}

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

std::string Tensor::shape_string() const { return srdcnn::shape_string(shape_); }

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.extent(1) != b.extent(0)) {
        throw dimension_error("matmul shape mismatch: " + a.shape_string() + " x " + b.shape_string());
    }
    const std::size_t m = a.extent(0), k = a.extent(1), p = b.extent(1);
    Tensor c({m, p});
    const auto& ops = kernels::active();
    // i-k-j order: the inner update is a contiguous axpy over a row of b.
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c.row(i);
        for (std::size_t kk = 0; kk < k; ++kk) {
            ops.axpy(a(i, kk), b.row(kk), crow, p);
        }
    }
    return c;
}

Tensor pad1d(const Tensor& x, std::size_t left, std::size_t right) {
    if (x.rank() != 2 && x.rank() != 3) {
        throw dimension_error("pad1d expects rank 2 or 3, got " + x.shape_string());
    }
    const std::size_t t = x.extent(x.rank() - 1);
    const std::size_t rows = x.size() / t;
    auto shape = x.shape();
    shape.back() = t + left + right;
    Tensor out(shape);
    const double* src = x.data();
    double* dst = out.data();
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy(src + r * t, src + (r + 1) * t, dst + r * (t + left + right) + left);
    }
    return out;
}

Tensor mean_axis(const Tensor& x, std::size_t axis) {
    if (axis >= x.rank()) {
        throw dimension_error("mean_axis axis " + std::to_string(axis) + " out of range for " + x.shape_string());
    }
    const auto& shape = x.shape();
    std::vector<std::size_t> out_shape;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i != axis) out_shape.push_back(shape[i]);
    }
    const std::size_t n = shape[axis];
    const std::size_t inner =
        std::accumulate(shape.begin() + axis + 1, shape.end(), std::size_t{1}, std::multiplies<>());
    const std::size_t outer = x.size() / (n * inner);
    const auto& ops = kernels::active();

    if (out_shape.empty()) {
        // rank-1 input reduces to a rank-0 scalar
        Tensor out(std::vector<std::size_t>{});
        out[0] = ops.sum(x.data(), n) / static_cast<double>(n);
        return out;
    }
    Tensor out(out_shape);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t o = 0; o < outer; ++o) {
        const double* base = x.data() + o * n * inner;
        double* obase = out.data() + o * inner;
        if (inner == 1) {
            obase[0] = ops.sum(base, n) * inv;
        } else {
            for (std::size_t j = 0; j < inner; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += base[i * inner + j];
                obase[j] = acc * inv;
            }
        }
    }
    return out;
}

} // namespace srdcnn
