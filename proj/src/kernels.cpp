#include "srdcnn/kernels.hpp"

#include <cstdlib>

#include "srdcnn/errors.hpp"

namespace srdcnn::kernels {
namespace {

bool avx2_available() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* pick_auto() {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) return &avx2_ops;
#endif
    return &scalar_ops;
}

const Ops* initial_table() {
    if (const char* env = std::getenv("SRDCNN_KERNELS")) {
        const std::string name(env);
        if (name == "scalar") return &scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
        if (name == "avx2" && avx2_available()) return &avx2_ops;
#endif
        // "auto", unknown names and unsupported requests all fall through
    }
    return pick_auto();
}

const Ops*& table() {
    static const Ops* t = initial_table();
    return t;
}

} // namespace

const Ops& active() { return *table(); }

Backend active_backend() {
    return table() == &scalar_ops ? Backend::scalar : Backend::avx2;
}

bool cpu_supports(Backend b) {
    return b == Backend::scalar || avx2_available();
}

void select(Backend b) {
    if (b == Backend::scalar) {
        table() = &scalar_ops;
        return;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) {
        table() = &avx2_ops;
        return;
    }
#endif
    throw config_error("kernel backend 'avx2' is not supported on this CPU");
}

void select_auto() { table() = pick_auto(); }

void select_by_name(const std::string& name) {
    if (name == "auto") {
        select_auto();
    } else if (name == "scalar") {
        select(Backend::scalar);
    } else if (name == "avx2") {
        select(Backend::avx2);
    } else {
        throw config_error("unknown kernel backend '" + name + "' (expected auto, scalar or avx2)");
    }
}

} // namespace srdcnn::kernels
