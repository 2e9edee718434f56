// NEON complex-double kernels (aarch64). One complex value per float64x2_t,
// [re, im]. Complex multiply: with v = [xr, xi] and vs = [xi, xr],
// a*x = v*ar + vs*ai*[-1, 1].

#if defined(__aarch64__)

#include <arm_neon.h>

#include "monomul/kernels.hpp"

namespace monomul::kernels::detail {

namespace {

const float64x2_t kSign = {-1.0, 1.0};

inline float64x2_t cmul(float64x2_t v, float64x2_t ar, float64x2_t ai) {
    float64x2_t vs = vextq_f64(v, v, 1);
    float64x2_t t = vmulq_f64(vmulq_f64(vs, ai), kSign);
    return vfmaq_f64(t, v, ar);
}

} // namespace

void axpy_neon(cplx* y, cplx a, const cplx* x, std::size_t n) {
    const float64x2_t ar = vdupq_n_f64(a.real());
    const float64x2_t ai = vdupq_n_f64(a.imag());
    double* yd = reinterpret_cast<double*>(y);
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t v = vld1q_f64(xd + 2 * i);
        float64x2_t acc = vld1q_f64(yd + 2 * i);
        vst1q_f64(yd + 2 * i, vaddq_f64(acc, cmul(v, ar, ai)));
    }
}

void scale_neon(cplx* y, cplx a, std::size_t n) {
    const float64x2_t ar = vdupq_n_f64(a.real());
    const float64x2_t ai = vdupq_n_f64(a.imag());
    double* yd = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t v = vld1q_f64(yd + 2 * i);
        vst1q_f64(yd + 2 * i, cmul(v, ar, ai));
    }
}

cplx dot_neon(const cplx* x, const cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t u = vld1q_f64(xd + 2 * i);
        float64x2_t v = vld1q_f64(yd + 2 * i);
        float64x2_t br = vdupq_laneq_f64(v, 0);
        float64x2_t bi = vdupq_laneq_f64(v, 1);
        acc = vaddq_f64(acc, cmul(u, br, bi));
    }
    return cplx(vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1));
}

void conv_trunc_neon(cplx* out, const cplx* a, const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0) continue;
        axpy_neon(out + i, a[i], b, n - i);
    }
}

} // namespace monomul::kernels::detail

#endif // aarch64
