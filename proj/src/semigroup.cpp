#include "monomul/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "monomul/ode.hpp"

namespace monomul {

namespace {

constexpr double kPoleTol = 1e-14;
constexpr double kEdgeTol = 1e-13;       // flow guard margin at the domain edge
constexpr double kValidateTol = 1e-10;   // generator sign / symmetry acceptance
constexpr double kBisectTol = 1e-10;     // fixed-point location accuracy
constexpr double kFirstMomentTol = 1e-12;
constexpr double kRecomposeTol = 1e-9;

double canonical_angle(double theta) {
    double a = std::fmod(theta, 2.0 * std::numbers::pi);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
}

bool in_flow_domain(MeasureDomain d, cplx u) {
    if (d == MeasureDomain::half_line)
        return distance_to_positive_ray(u) > kEdgeTol * (1.0 + std::abs(u));
    return std::abs(u) < 1.0 - kEdgeTol;
}

} // namespace

Generator Generator::half_line(double a, std::vector<Atom> nu) {
    Generator g;
    g.kind_ = Kind::half_line_atomic;
    g.a_ = a;
    for (const Atom& at : nu) {
        if (!(at.weight >= 0.0))
            raise(ErrorCode::InvalidInput, "generator jump weights must be nonnegative");
        if (!(at.position >= 0.0))
            raise(ErrorCode::InvalidInput, "generator jump positions must be nonnegative");
        if (at.weight > 0.0) g.nu_.push_back(at);
    }
    std::sort(g.nu_.begin(), g.nu_.end(),
              [](const Atom& x, const Atom& y) { return x.position < y.position; });
    return g;
}

Generator Generator::circle(double beta, std::vector<Atom> rho) {
    Generator g;
    g.kind_ = Kind::circle_herglotz;
    g.beta_ = beta;
    for (Atom at : rho) {
        if (!(at.weight >= 0.0))
            raise(ErrorCode::InvalidInput, "generator boundary weights must be nonnegative");
        at.position = canonical_angle(at.position);
        if (at.weight > 0.0) g.rho_.push_back(at);
    }
    std::sort(g.rho_.begin(), g.rho_.end(),
              [](const Atom& x, const Atom& y) { return x.position < y.position; });
    return g;
}

Generator Generator::circle_power(int n) {
    if (n < 1) raise(ErrorCode::InvalidInput, "power generator needs n >= 1");
    Generator g;
    g.kind_ = Kind::circle_power;
    g.power_ = n;
    return g;
}

MeasureDomain Generator::domain() const {
    return kind_ == Kind::half_line_atomic ? MeasureDomain::half_line : MeasureDomain::circle;
}

cplx Generator::drift() const {
    switch (kind_) {
    case Kind::half_line_atomic:
        return a_;
    case Kind::circle_herglotz: {
        double mass = 0.0;
        for (const Atom& at : rho_) mass += at.weight;
        return cplx(-mass, beta_);
    }
    case Kind::circle_power:
        return -1.0;
    }
    return 0.0;
}

cplx Generator::B_full(cplx z) const {
    switch (kind_) {
    case Kind::half_line_atomic: {
        cplx acc = a_;
        for (const Atom& at : nu_) {
            const cplx den = 1.0 - z * at.position;
            if (std::abs(den) <= kPoleTol)
                raise(ErrorCode::PoleHit, "generator evaluated at a jump pole");
            acc += z * at.weight / den;
        }
        return acc;
    }
    case Kind::circle_herglotz: {
        cplx acc(0.0, beta_);
        for (const Atom& at : rho_) {
            const cplx zeta = std::polar(1.0, at.position);
            const cplx den = zeta - z;
            if (std::abs(den) <= kPoleTol)
                raise(ErrorCode::PoleHit, "generator evaluated at a boundary pole");
            acc -= at.weight * (zeta + z) / den;
        }
        return acc;
    }
    case Kind::circle_power:
        return std::pow(z, power_) - 1.0;
    }
    return 0.0;
}

TruncatedSeries Generator::B_full_series(int order) const {
    TruncatedSeries b(order);
    b.set_coeff(0, drift());
    switch (kind_) {
    case Kind::half_line_atomic:
        // z * w / (1 - z t) contributes w t^{k-1} at order k.
        for (const Atom& at : nu_) {
            double p = 1.0;
            for (int k = 1; k <= order; ++k) {
                b.set_coeff(k, b.coeff(k) + at.weight * p);
                p *= at.position;
            }
        }
        break;
    case Kind::circle_herglotz:
        // -w (zeta + z)/(zeta - z) = -w - 2w sum_k (z / zeta)^k.
        for (const Atom& at : rho_) {
            for (int k = 1; k <= order; ++k)
                b.set_coeff(k, b.coeff(k) -
                                   2.0 * at.weight * std::polar(1.0, -k * at.position));
        }
        break;
    case Kind::circle_power:
        if (power_ <= order) b.set_coeff(power_, b.coeff(power_) + 1.0);
        break;
    }
    return b;
}

GeneratorValidation validate_generator(const Generator& g) {
    GeneratorValidation v;
    if (g.domain() == MeasureDomain::half_line) {
        // Upper half-plane grid: the jump part must have nonnegative imaginary
        // part there and commute with conjugation.
        for (int i = 0; i < 20; ++i) {
            const double r = std::pow(10.0, -2.0 + 4.0 * i / 19.0);
            for (int j = 0; j < 10; ++j) {
                const double phi = std::numbers::pi * (j + 0.5) / 10.0;
                const cplx z = std::polar(r, phi);
                const cplx b = g.B_full(z);
                v.worst_sign_violation = std::max(v.worst_sign_violation, -b.imag());
                const double sym = std::abs(g.B_full(std::conj(z)) - std::conj(b));
                v.worst_symmetry_violation = std::max(v.worst_symmetry_violation, sym);
            }
        }
    } else {
        // Disk grid: the field must point weakly inward, Re B <= 0.
        for (int i = 0; i < 20; ++i) {
            const double r = 0.05 + 0.90 * i / 19.0;
            for (int j = 0; j < 10; ++j) {
                const double phi = 2.0 * std::numbers::pi * j / 10.0;
                const cplx b = g.B_full(std::polar(r, phi));
                v.worst_sign_violation = std::max(v.worst_sign_violation, b.real());
            }
        }
    }
    v.ok = v.worst_sign_violation <= kValidateTol &&
           v.worst_symmetry_violation <= kValidateTol;
    return v;
}

HalflineClassification classify_halfline_generator(const Generator& g) {
    if (g.domain() != MeasureDomain::half_line)
        raise(ErrorCode::InvalidInput, "classification applies to half-line generators");
    const double a = g.halfline_drift();
    if (a <= 0.0) return {HalflineFlowClass::denjoy_wolff_zero, std::nullopt};

    // B is increasing on the negative axis with B(0) = a > 0; its limit at
    // -infinity decides between a root and positivity throughout.
    double limit = a;
    bool atom_at_zero = false;
    for (const Atom& at : g.nu()) {
        if (at.position == 0.0)
            atom_at_zero = true;
        else
            limit -= at.weight / at.position;
    }
    if (!atom_at_zero && limit >= 0.0)
        return {HalflineFlowClass::denjoy_wolff_infinity, std::nullopt};

    const auto b_real = [&](double x) { return g.B_full(cplx(x, 0.0)).real(); };
    double lo = -1.0;
    int expand = 0;
    while (b_real(lo) >= 0.0) {
        lo *= 2.0;
        if (++expand > 600)
            raise(ErrorCode::DomainViolation, "no sign change found on the negative axis");
    }
    double hi = 0.0; // B(0) = a > 0
    for (int i = 0; i < 500 && hi - lo > kBisectTol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (b_real(mid) < 0.0 ? lo : hi) = mid;
    }
    return {HalflineFlowClass::interior_fixed_point, 0.5 * (lo + hi)};
}

namespace {

// Pointwise time-tau map of u' = u * (B(u) - shift) starting at z0.
cplx pointwise_rk(const Generator& g, cplx z0, double tau, cplx shift,
                  const FlowOptions& opts) {
    const MeasureDomain d = g.domain();
    cplx u = z0;
    ode::StepControl ctrl{opts.abs_tol, opts.max_step, opts.max_iter};
    ode::rk45_integrate(
        u, 0.0, tau, [&](const cplx& y) { return y * (g.B_full(y) - shift); },
        [&](const cplx& y) { return in_flow_domain(d, y); }, ctrl);
    return u;
}

cplx pointwise_euler(const Generator& g, cplx z0, double tau, cplx shift,
                     const FlowOptions& opts) {
    const MeasureDomain d = g.domain();
    if (tau == 0.0) return z0;
    const auto n = static_cast<std::uint64_t>(std::ceil(tau / opts.euler_substep));
    const double eps = tau / static_cast<double>(n);
    cplx u = z0;
    for (std::uint64_t i = 0; i < n; ++i) {
        u *= std::exp(eps * (g.B_full(u) - shift));
        if (!in_flow_domain(d, u))
            raise(ErrorCode::DomainExit, "euler step left the transform domain");
    }
    return u;
}

cplx pointwise_value(const Generator& g, cplx z0, double tau, cplx shift,
                     const FlowOptions& opts) {
    switch (opts.scheme) {
    case Scheme::rk:
        return pointwise_rk(g, z0, tau, shift, opts);
    case Scheme::euler_exp:
        return pointwise_euler(g, z0, tau, shift, opts);
    case Scheme::crosscheck: {
        const cplx a = pointwise_rk(g, z0, tau, shift, opts);
        const cplx b = pointwise_euler(g, z0, tau, shift, opts);
        if (std::abs(a - b) > opts.cross_tol)
            raise(ErrorCode::SchemeDisagreement,
                  "integration schemes disagree beyond the crosscheck tolerance");
        return a;
    }
    }
    raise(ErrorCode::InvalidInput, "unknown scheme");
}

void check_taus(std::span<const double> taus) {
    double prev = 0.0;
    for (double t : taus) {
        if (!(t >= prev))
            raise(ErrorCode::InvalidInput, "checkpoints must be nonnegative and ascending");
        prev = t;
    }
}

} // namespace

std::vector<FlowSample> integrate_flow(const Generator& g, ConvOp op, cplx z0,
                                       std::span<const double> taus,
                                       const FlowOptions& opts) {
    check_taus(taus);
    TransformPoint::in_domain(g.domain(), z0);
    const cplx a = g.drift();

    std::vector<FlowSample> out;
    out.reserve(taus.size());
    if (op == ConvOp::mconv0) {
        // eta_tau(z) = u_tau(exp(a tau) z); each checkpoint has its own
        // starting point, so integrate each from scratch.
        for (double tau : taus) {
            const cplx start = std::exp(a * tau) * z0;
            out.push_back({tau, pointwise_value(g, start, tau, a, opts)});
        }
    } else {
        // eta itself flows along z * B(z); one trajectory serves all
        // checkpoints.
        cplx u = z0;
        double prev = 0.0;
        for (double tau : taus) {
            u = pointwise_value(g, u, tau - prev, 0.0, opts);
            prev = tau;
            out.push_back({tau, u});
        }
    }
    return out;
}

cplx eta_value(const Generator& g, ConvOp op, cplx z, double tau, const FlowOptions& opts) {
    const double taus[1] = {tau};
    return integrate_flow(g, op, z, taus, opts)[0].value;
}

cplx increment_flow_value(const Generator& g, cplx z, double tau, const FlowOptions& opts) {
    if (!(tau >= 0.0)) raise(ErrorCode::InvalidInput, "flow time must be nonnegative");
    TransformPoint::in_domain(g.domain(), z);
    return pointwise_value(g, z, tau, g.drift(), opts);
}

namespace {

// Series-level flow state: tail coefficients v_1..v_N of the evolving eta.
// For the forward-increment convolution the exp(a tau) rescaling is folded
// into the field, v' = v (B(v) - a) + a z dv/dz, so coefficients stay bounded
// even when the raw composition flow grows like exp(|a| k tau).
struct SeriesField {
    const Generator* g;
    ConvOp op;
    int order;
    TruncatedSeries b_tail; // B - a, zero constant term
    cplx a;

    SeriesField(const Generator& gen, ConvOp o, int n)
        : g(&gen), op(o), order(n), b_tail(gen.B_full_series(n)), a(gen.drift()) {
        b_tail.set_coeff(0, 0.0);
    }

    std::vector<cplx> operator()(const std::vector<cplx>& state) const {
        TruncatedSeries v(order);
        for (int k = 1; k <= order; ++k) v.set_coeff(k, state[k - 1]);
        TruncatedSeries rhs = v * compose(b_tail, v);
        if (op == ConvOp::mconv0) {
            for (int k = 1; k <= order; ++k)
                rhs.set_coeff(k, rhs.coeff(k) + a * static_cast<double>(k) * v.coeff(k));
        } else {
            rhs += a * v;
        }
        std::vector<cplx> out(static_cast<std::size_t>(order));
        for (int k = 1; k <= order; ++k) out[k - 1] = rhs.coeff(k);
        return out;
    }
};

std::vector<cplx> series_identity_state(int order) {
    std::vector<cplx> v(static_cast<std::size_t>(order), cplx(0.0));
    v[0] = 1.0;
    return v;
}

bool series_state_ok(const std::vector<cplx>& v) {
    for (const cplx& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

void series_rk_segment(const SeriesField& field, std::vector<cplx>& state, double dt,
                       const FlowOptions& opts) {
    ode::StepControl ctrl{opts.abs_tol, opts.max_step, opts.max_iter};
    ode::rk45_integrate(
        state, 0.0, dt, field, [](const std::vector<cplx>& v) { return series_state_ok(v); },
        ctrl);
}

// One exponential-Euler step at the series level: v <- w_eps o v, where
// w_eps(z) = z exp(eps (B(z) - a)); the forward-increment state first picks
// up the exp(a eps) argument rescale, the plain flow instead multiplies by
// the scalar exp(a eps) (from composing with z exp(eps B)).
void series_euler_segment(const SeriesField& field, std::vector<cplx>& state, double dt,
                          const FlowOptions& opts) {
    if (dt == 0.0) return;
    const int order = field.order;
    const auto n = static_cast<std::uint64_t>(std::ceil(dt / opts.euler_substep));
    const double eps = dt / static_cast<double>(n);
    TruncatedSeries w = TruncatedSeries::identity(order) *
                        (field.b_tail * cplx(eps)).exp_zero_constant();
    const cplx ascale = std::exp(field.a * eps);
    if (field.op == ConvOp::mconv) w *= ascale;

    TruncatedSeries v(order);
    for (int k = 1; k <= order; ++k) v.set_coeff(k, state[k - 1]);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (field.op == ConvOp::mconv0) v = v.rescale_argument(ascale);
        v = compose(w, v);
        if (!std::isfinite(v.max_abs()))
            raise(ErrorCode::DomainExit, "series euler step diverged");
    }
    for (int k = 1; k <= order; ++k) state[k - 1] = v.coeff(k);
}

void series_segment(const SeriesField& field, std::vector<cplx>& state, double dt,
                    const FlowOptions& opts) {
    switch (opts.scheme) {
    case Scheme::rk:
        series_rk_segment(field, state, dt, opts);
        return;
    case Scheme::euler_exp:
        series_euler_segment(field, state, dt, opts);
        return;
    case Scheme::crosscheck: {
        std::vector<cplx> alt = state;
        series_rk_segment(field, state, dt, opts);
        series_euler_segment(field, alt, dt, opts);
        double worst = 0.0;
        for (std::size_t i = 0; i < state.size(); ++i)
            worst = std::max(worst, std::abs(state[i] - alt[i]));
        if (worst > opts.cross_tol)
            raise(ErrorCode::SchemeDisagreement,
                  "series integration schemes disagree beyond the crosscheck tolerance");
        return;
    }
    }
    raise(ErrorCode::InvalidInput, "unknown scheme");
}

} // namespace

std::vector<SemigroupPoint> semigroup_measures(const Generator& g, ConvOp op,
                                               std::span<const double> taus, int order,
                                               const FlowOptions& opts) {
    check_taus(taus);
    if (order < 1) raise(ErrorCode::InvalidInput, "series flow needs order >= 1");

    const SeriesField field(g, op, order);
    std::vector<cplx> state = series_identity_state(order);
    std::vector<SemigroupPoint> out;
    out.reserve(taus.size());

    double prev = 0.0;
    for (double tau : taus) {
        series_segment(field, state, tau - prev, opts);
        prev = tau;

        TruncatedSeries eta(order);
        for (int k = 1; k <= order; ++k) eta.set_coeff(k, state[k - 1]);
        MomentSequence m = moments_from_eta(eta);
        std::optional<AtomicMeasure> measure = try_prony_recover(m, g.domain());
        out.push_back({tau, std::move(eta), std::move(m), std::move(measure)});
    }
    return out;
}

std::vector<MomentSequence> divisibility_chain(const MomentSequence& mu, ConvOp op,
                                               int depth) {
    if (depth < 0) raise(ErrorCode::InvalidInput, "chain depth must be nonnegative");
    if (mu.order() < 1) raise(ErrorCode::InvalidInput, "chain needs at least one moment");
    if (std::abs(mu.moment(1)) <= kFirstMomentTol)
        raise(ErrorCode::ZeroFirstMoment,
              "divisibility chain requires a nonzero first moment");
    const int order = mu.order();

    const auto verify = [&](const MomentSequence& parent, const MomentSequence& back) {
        for (int n = 1; n <= order; ++n) {
            const double scale = std::max(1.0, std::abs(parent.moment(n)));
            if (std::abs(back.moment(n) - parent.moment(n)) > kRecomposeTol * scale)
                raise(ErrorCode::RecompositionFailure,
                      "convolution square of the root does not recompose its parent");
        }
    };

    std::vector<MomentSequence> chain;
    chain.reserve(static_cast<std::size_t>(depth) + 1);
    chain.push_back(mu.truncated(order));

    for (int level = 0; level < depth; ++level) {
        const MomentSequence& parent = chain.back();
        const cplx lambda = parent.moment(1);
        if (std::abs(lambda) <= kFirstMomentTol)
            raise(ErrorCode::ZeroFirstMoment,
                  "divisibility chain hit a level with vanishing first moment");

        MomentSequence root;
        if (op == ConvOp::mconv0) {
            // Normalize the first moment to 1; there the forward-increment
            // square is plain self-composition of eta, so take the order-2
            // compositional root on the trivial branch and dilate back by
            // the principal square root.
            const MomentSequence unit = parent.dilate(1.0 / lambda);
            const TruncatedSeries eta = eta_from_moments(unit);
            const TruncatedSeries root_eta = compositional_root(eta, 2, cplx(1.0));
            root = moments_from_eta(root_eta).dilate(std::pow(lambda, 0.5));
        } else {
            const TruncatedSeries eta = eta_from_moments(parent);
            root = moments_from_eta(compositional_root(eta, 2));
        }

        const MomentSequence back =
            op == ConvOp::mconv0 ? mconv0(root, root, order) : mconv(root, root, order);
        verify(parent, back);
        chain.push_back(std::move(root));
    }
    return chain;
}

} // namespace monomul
