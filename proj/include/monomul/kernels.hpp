#pragma once

#include <complex>
#include <cstddef>

// Low-level array kernels for the complex arithmetic inner loops (series
// convolution, operator application). Scalar reference versions always exist;
// SIMD variants (AVX2 on x86-64, NEON on aarch64) are selected at runtime.
// All kernels of one name compute bit-compatible results up to floating-point
// reassociation; the equivalence tests pin scalar vs dispatched agreement.

namespace monomul::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2, neon };

// Backend chosen by the dispatcher (CPU detection + MONOMUL_KERNELS override).
Backend active_backend();
bool backend_supported(Backend b);
// Force a specific backend, e.g. for equivalence tests. Throws on unsupported.
void force_backend(Backend b);

// y[i] += a * x[i]
void axpy(cplx* y, cplx a, const cplx* x, std::size_t n);
// y[i] *= a
void scale(cplx* y, cplx a, std::size_t n);
// sum_i x[i] * y[i]  (bilinear, no conjugation)
cplx dot(const cplx* x, const cplx* y, std::size_t n);
// Truncated Cauchy product: out[k] = sum_{i+j=k} a[i]*b[j] for k < n.
// out must not alias a or b.
void conv_trunc(cplx* out, const cplx* a, const cplx* b, std::size_t n);

namespace detail {
void axpy_scalar(cplx* y, cplx a, const cplx* x, std::size_t n);
void scale_scalar(cplx* y, cplx a, std::size_t n);
cplx dot_scalar(const cplx* x, const cplx* y, std::size_t n);
void conv_trunc_scalar(cplx* out, const cplx* a, const cplx* b, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
void axpy_avx2(cplx* y, cplx a, const cplx* x, std::size_t n);
void scale_avx2(cplx* y, cplx a, std::size_t n);
cplx dot_avx2(const cplx* x, const cplx* y, std::size_t n);
void conv_trunc_avx2(cplx* out, const cplx* a, const cplx* b, std::size_t n);
#endif

#if defined(__aarch64__)
void axpy_neon(cplx* y, cplx a, const cplx* x, std::size_t n);
void scale_neon(cplx* y, cplx a, std::size_t n);
cplx dot_neon(const cplx* x, const cplx* y, std::size_t n);
void conv_trunc_neon(cplx* out, const cplx* a, const cplx* b, std::size_t n);
#endif
} // namespace detail

} // namespace monomul::kernels
