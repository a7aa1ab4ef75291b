#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops used by every layer. Each operation exists as a
// scalar reference implementation and, on x86-64 with AVX2+FMA, a vectorized
// variant. The active table is picked once at startup (CPUID probe, or the
// SRDCNN_KERNELS environment variable: auto | scalar | avx2) and can be
// switched explicitly; the equivalence test suite runs both backends against
// each other. Elementwise ops agree to within one ulp (FMA contraction),
// reductions to within summation-reordering noise.

namespace srdcnn::kernels {

enum class Backend { scalar, avx2 };

struct Ops {
    const char* name;

    // reductions
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*sum_abs)(const double* x, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);

    // elementwise
    void (*axpy)(double a, const double* x, double* y, std::size_t n);        // y += a*x
    void (*affine)(double a, double c, const double* x, double* y, std::size_t n); // y = a*x + c
    void (*relu)(const double* x, double* y, std::size_t n);                  // y = max(x, 0)
    void (*relu_grad)(const double* x, const double* g, double* y, std::size_t n); // y = x>0 ? g : 0

    // fused Adam update; inv_bc1 = 1/(1-beta1^t), inv_bc2 = 1/(1-beta2^t)
    void (*adam_update)(double* p, const double* g, double* m, double* v, std::size_t n,
                        double lr, double beta1, double beta2,
                        double inv_bc1, double inv_bc2, double eps);
};

extern const Ops scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif

// Active dispatch table. First call resolves SRDCNN_KERNELS / CPUID.
const Ops& active();
Backend active_backend();

// Force a backend (tests, benchmarking). Throws srdcnn::config_error if the
// CPU cannot run it. select_by_name accepts "scalar", "avx2" or "auto".
void select(Backend b);
void select_auto();
void select_by_name(const std::string& name);

bool cpu_supports(Backend b);

} // namespace srdcnn::kernels
