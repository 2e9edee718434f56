#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "monomul/errors.hpp"
#include "monomul/kernels.hpp"
#include "monomul/series.hpp"

// Adaptive Dormand-Prince 5(4) over a generic state (complex scalar for
// pointwise trajectories, coefficient vector for series-level flows), with a
// domain guard: steps whose endpoint leaves the admissible region are
// rejected and retried smaller, so trajectories stop loudly instead of
// drifting through a singularity.

namespace monomul::ode {

template <class State>
struct Traits;

template <>
struct Traits<cplx> {
    static cplx zero_like(const cplx&) { return 0.0; }
    static void axpy(cplx& y, double a, const cplx& x) { y += a * x; }
    static double norm(const cplx& y) { return std::abs(y); }
};

template <>
struct Traits<std::vector<cplx>> {
    static std::vector<cplx> zero_like(const std::vector<cplx>& v) {
        return std::vector<cplx>(v.size(), cplx(0.0));
    }
    static void axpy(std::vector<cplx>& y, double a, const std::vector<cplx>& x) {
        kernels::axpy(y.data(), cplx(a), x.data(), y.size());
    }
    static double norm(const std::vector<cplx>& v) {
        double m = 0.0;
        for (const cplx& c : v) m = std::max(m, std::abs(c));
        return m;
    }
};

struct StepControl {
    double abs_tol = 1e-10;
    double max_step = 1e-2;
    std::uint64_t max_iter = 10'000'000;
};

// Integrates y' = rhs(y) from t0 to t1 in place. guard(y) must stay true;
// a step that violates it is retried with half the size. Throws DomainExit
// when the step size underflows or the iteration cap is hit.
template <class State, class RHS, class Guard>
void rk45_integrate(State& y, double t0, double t1, RHS&& rhs, Guard&& guard,
                    const StepControl& ctrl) {
    using T = Traits<State>;
    if (t1 <= t0) {
        if (t1 < t0) raise(ErrorCode::InvalidInput, "integration must run forward");
        return;
    }

    // Dormand-Prince coefficients.
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                            e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                            e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

    double t = t0;
    double h = std::min(ctrl.max_step, t1 - t0);
    std::uint64_t iter = 0;

    while (t < t1) {
        if (++iter > ctrl.max_iter)
            raise(ErrorCode::DomainExit, "flow integration hit the iteration cap");
        h = std::min(h, t1 - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            raise(ErrorCode::DomainExit, "flow step size underflowed near the domain edge");

        const State k1 = rhs(y);
        State s = y;
        T::axpy(s, h * a21, k1);
        const State k2 = rhs(s);
        s = y;
        T::axpy(s, h * a31, k1);
        T::axpy(s, h * a32, k2);
        const State k3 = rhs(s);
        s = y;
        T::axpy(s, h * a41, k1);
        T::axpy(s, h * a42, k2);
        T::axpy(s, h * a43, k3);
        const State k4 = rhs(s);
        s = y;
        T::axpy(s, h * a51, k1);
        T::axpy(s, h * a52, k2);
        T::axpy(s, h * a53, k3);
        T::axpy(s, h * a54, k4);
        const State k5 = rhs(s);
        s = y;
        T::axpy(s, h * a61, k1);
        T::axpy(s, h * a62, k2);
        T::axpy(s, h * a63, k3);
        T::axpy(s, h * a64, k4);
        T::axpy(s, h * a65, k5);
        const State k6 = rhs(s);
        // 5th-order solution.
        State ynew = y;
        T::axpy(ynew, h * b1, k1);
        T::axpy(ynew, h * b3, k3);
        T::axpy(ynew, h * b4, k4);
        T::axpy(ynew, h * b5, k5);
        T::axpy(ynew, h * b6, k6);
        const State k7 = rhs(ynew);

        State err = T::zero_like(y);
        T::axpy(err, h * e1, k1);
        T::axpy(err, h * e3, k3);
        T::axpy(err, h * e4, k4);
        T::axpy(err, h * e5, k5);
        T::axpy(err, h * e6, k6);
        T::axpy(err, h * e7, k7);
        const double errn = T::norm(err);

        if (errn <= ctrl.abs_tol && guard(ynew)) {
            t += h;
            y = std::move(ynew);
            const double grow =
                errn > 0.0 ? 0.9 * std::pow(ctrl.abs_tol / errn, 0.2) : 5.0;
            h = std::min(ctrl.max_step, h * std::clamp(grow, 0.2, 5.0));
        } else if (errn <= ctrl.abs_tol) {
            h *= 0.5; // domain violation at acceptable error: retreat
        } else {
            h *= std::clamp(0.9 * std::pow(ctrl.abs_tol / errn, 0.2), 0.1, 0.9);
        }
    }
}

} // namespace monomul::ode
