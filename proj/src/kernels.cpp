#include "monomul/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "monomul/errors.hpp"

namespace monomul::kernels {

namespace detail {

void axpy_scalar(cplx* y, cplx a, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(cplx* y, cplx a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

cplx dot_scalar(const cplx* x, const cplx* y, std::size_t n) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void conv_trunc_scalar(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
    std::memset(static_cast<void*>(out), 0, n * sizeof(cplx));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0) continue;
        axpy_scalar(out + i, a[i], b, n - i);
    }
}

} // namespace detail

namespace {

struct Table {
    void (*axpy)(cplx*, cplx, const cplx*, std::size_t);
    void (*scale)(cplx*, cplx, std::size_t);
    cplx (*dot)(const cplx*, const cplx*, std::size_t);
    void (*conv)(cplx*, const cplx*, const cplx*, std::size_t);
    Backend backend;
};

constexpr Table scalar_table{detail::axpy_scalar, detail::scale_scalar,
                             detail::dot_scalar, detail::conv_trunc_scalar,
                             Backend::scalar};

Table table_for(Backend b) {
    switch (b) {
    case Backend::scalar:
        return scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
        return {detail::axpy_avx2, detail::scale_avx2, detail::dot_avx2,
                detail::conv_trunc_avx2, Backend::avx2};
#endif
#if defined(__aarch64__)
    case Backend::neon:
        return {detail::axpy_neon, detail::scale_neon, detail::dot_neon,
                detail::conv_trunc_neon, Backend::neon};
#endif
    default:
        return scalar_table;
    }
}

bool cpu_supports(Backend b) {
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Backend pick_default() {
    if (const char* env = std::getenv("MONOMUL_KERNELS")) {
        std::string want(env);
        if (want == "scalar") return Backend::scalar;
        if (want == "avx2" && cpu_supports(Backend::avx2)) return Backend::avx2;
        if (want == "neon" && cpu_supports(Backend::neon)) return Backend::neon;
        // Unknown or unsupported request: fall through to auto-detection.
    }
    if (cpu_supports(Backend::avx2)) return Backend::avx2;
    if (cpu_supports(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

Table& current() {
    static Table t = table_for(pick_default());
    return t;
}

} // namespace

Backend active_backend() { return current().backend; }

bool backend_supported(Backend b) { return cpu_supports(b); }

void force_backend(Backend b) {
    if (!cpu_supports(b)) raise(ErrorCode::InvalidInput, "kernel backend not supported on this CPU");
    current() = table_for(b);
}

void axpy(cplx* y, cplx a, const cplx* x, std::size_t n) { current().axpy(y, a, x, n); }
void scale(cplx* y, cplx a, std::size_t n) { current().scale(y, a, n); }
cplx dot(const cplx* x, const cplx* y, std::size_t n) { return current().dot(x, y, n); }
void conv_trunc(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
    current().conv(out, a, b, n);
}

} // namespace monomul::kernels
