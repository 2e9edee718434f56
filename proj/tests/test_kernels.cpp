#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "monomul/kernels.hpp"
#include "monomul/rng.hpp"

using monomul::DrawGen;
using monomul::kernels::Backend;
using cplx = monomul::kernels::cplx;

namespace {

std::vector<cplx> random_vec(DrawGen& gen, std::size_t n) {
    std::vector<cplx> v(n);
    for (cplx& c : v) c = gen.complex_in_disk(2.0);
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Lengths around and past the SIMD widths, including odd tails.
const std::size_t kLengths[] = {1, 2, 3, 4, 5, 7, 8, 13, 16, 31, 33, 64};

} // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
    using namespace monomul::kernels;
    DrawGen gen(7);

    for (Backend b : {Backend::avx2, Backend::neon}) {
        if (!backend_supported(b)) continue;
        CAPTURE(static_cast<int>(b));
        for (std::size_t n : kLengths) {
            const std::vector<cplx> x = random_vec(gen, n);
            const std::vector<cplx> base = random_vec(gen, n);
            const cplx a = gen.complex_in_disk(2.0);

            std::vector<cplx> y_ref = base, y_simd = base;
            force_backend(Backend::scalar);
            axpy(y_ref.data(), a, x.data(), n);
            force_backend(b);
            axpy(y_simd.data(), a, x.data(), n);
            CHECK(max_diff(y_ref, y_simd) < 1e-13);

            y_ref = base;
            y_simd = base;
            force_backend(Backend::scalar);
            scale(y_ref.data(), a, n);
            force_backend(b);
            scale(y_simd.data(), a, n);
            CHECK(max_diff(y_ref, y_simd) < 1e-13);

            force_backend(Backend::scalar);
            const cplx d_ref = dot(x.data(), base.data(), n);
            force_backend(b);
            const cplx d_simd = dot(x.data(), base.data(), n);
            CHECK(std::abs(d_ref - d_simd) < 1e-12);

            std::vector<cplx> out_ref(n), out_simd(n);
            force_backend(Backend::scalar);
            conv_trunc(out_ref.data(), x.data(), base.data(), n);
            force_backend(b);
            conv_trunc(out_simd.data(), x.data(), base.data(), n);
            CHECK(max_diff(out_ref, out_simd) < 1e-12);
        }
    }
    force_backend(Backend::scalar);
}

TEST_CASE("conv_trunc equals the naive Cauchy product") {
    using namespace monomul::kernels;
    DrawGen gen(8);
    for (std::size_t n : {1u, 2u, 5u, 17u, 32u}) {
        const std::vector<cplx> a = random_vec(gen, n);
        const std::vector<cplx> b = random_vec(gen, n);
        std::vector<cplx> naive(n, cplx(0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j) naive[i + j] += a[i] * b[j];
        std::vector<cplx> out(n);
        conv_trunc(out.data(), a.data(), b.data(), n);
        CHECK(max_diff(naive, out) < 1e-12);
    }
}

TEST_CASE("dot is bilinear without conjugation") {
    using namespace monomul::kernels;
    const cplx x[2] = {cplx(0.0, 1.0), cplx(2.0, 0.0)};
    const cplx y[2] = {cplx(0.0, 1.0), cplx(0.0, 1.0)};
    // i*i + 2*i = -1 + 2i (a conjugating dot would give 1 + 2i or 1 - 2i)
    CHECK(std::abs(dot(x, y, 2) - cplx(-1.0, 2.0)) < 1e-15);
}

TEST_CASE("scalar backend can always be forced; unsupported backends throw") {
    using namespace monomul::kernels;
    force_backend(Backend::scalar);
    CHECK(active_backend() == Backend::scalar);
    CHECK(backend_supported(Backend::scalar));
#if defined(__x86_64__)
    CHECK_FALSE(backend_supported(Backend::neon));
    CHECK_THROWS(force_backend(Backend::neon));
#elif defined(__aarch64__)
    CHECK_FALSE(backend_supported(Backend::avx2));
    CHECK_THROWS(force_backend(Backend::avx2));
#endif
}
