// AVX2 complex-double kernels. Two interleaved complex values per __m256d
// lane pair: [re0, im0, re1, im1]. Complex multiply-accumulate uses the
// standard fmaddsub trick: with v = [xr, xi, ...], vs = [xi, xr, ...],
// fmaddsub(v, [ar,ar,..], vs*[ai,ai,..]) = [ar*xr - ai*xi, ar*xi + ai*xr, ..].
// Compiled via function-level target attributes so no special flags are
// needed; the dispatcher only calls these after a CPUID check.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "monomul/kernels.hpp"

namespace monomul::kernels::detail {

namespace {

__attribute__((target("avx2,fma"))) inline __m256d cmul_acc(__m256d acc, __m256d v,
                                                            __m256d ar, __m256d ai) {
    __m256d vs = _mm256_permute_pd(v, 0b0101);
    __m256d t = _mm256_mul_pd(vs, ai);
    return _mm256_add_pd(acc, _mm256_fmaddsub_pd(v, ar, t));
}

} // namespace

__attribute__((target("avx2,fma"))) void axpy_avx2(cplx* y, cplx a, const cplx* x,
                                                   std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    double* yd = reinterpret_cast<double*>(y);
    const double* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(xd + 2 * i);
        __m256d acc = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, cmul_acc(acc, v, ar, ai));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) void scale_avx2(cplx* y, cplx a, std::size_t n) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    double* yd = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(yd + 2 * i);
        __m256d vs = _mm256_permute_pd(v, 0b0101);
        __m256d t = _mm256_mul_pd(vs, ai);
        _mm256_storeu_pd(yd + 2 * i, _mm256_fmaddsub_pd(v, ar, t));
    }
    for (; i < n; ++i) y[i] *= a;
}

__attribute__((target("avx2,fma"))) cplx dot_avx2(const cplx* x, const cplx* y,
                                                  std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d u = _mm256_loadu_pd(xd + 2 * i); // [ar0, ai0, ar1, ai1]
        __m256d v = _mm256_loadu_pd(yd + 2 * i);
        __m256d us = _mm256_permute_pd(u, 0b0101);
        // Accumulate the interleaved complex products [Re(ab), Im(ab), ...];
        // unpacklo/hi broadcast br/bi within each 128-bit lane.
        __m256d prod = _mm256_fmaddsub_pd(
            u, _mm256_unpacklo_pd(v, v), _mm256_mul_pd(us, _mm256_unpackhi_pd(v, v)));
        acc = _mm256_add_pd(acc, prod);
    }
    double buf[4];
    _mm256_storeu_pd(buf, acc);
    cplx total(buf[0] + buf[2], buf[1] + buf[3]);
    for (; i < n; ++i) total += x[i] * y[i];
    return total;
}

__attribute__((target("avx2,fma"))) void conv_trunc_avx2(cplx* out, const cplx* a,
                                                         const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0) continue;
        axpy_avx2(out + i, a[i], b, n - i);
    }
}

} // namespace monomul::kernels::detail

#endif // x86-64
