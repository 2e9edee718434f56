#include "monomul/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <vector>

#include "monomul/convolution.hpp"
#include "monomul/errors.hpp"
#include "monomul/measures.hpp"
#include "monomul/operator_model.hpp"
#include "monomul/semigroup.hpp"
#include "monomul/series.hpp"

namespace monomul {

namespace {

// Pinned acceptance tolerances.
constexpr double kOracleTol = 1e-8;  // series calculus vs the operator oracle
constexpr double kFlowTol = 1e-6;    // flows vs closed forms and each other
constexpr double kHaarTol = 1e-12;   // moment collapse of centered factors
constexpr double kSupportTol = 1e-6; // product support bound slack
constexpr double kSchurTol = 1e-12;  // eta contraction slack
constexpr double kAxiomTol = 1e-10;  // realization axiom residuals
constexpr int kOracleDim = 64;

std::string fmt(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", x);
    return b;
}

// A degree <= 3 symbol polynomial with a well-separated constant term, plus a
// centering constant in the closed unit disk.
ShiftPolyVariable random_variable(DrawGen& gen, bool zero_centering) {
    ShiftPolyVariable v;
    const int deg = static_cast<int>(gen.uniform_int(0, 3));
    v.u.resize(static_cast<std::size_t>(deg) + 1);
    v.u[0] = gen.complex_in_annulus(0.5, 1.0);
    for (int k = 1; k <= deg; ++k) v.u[k] = gen.complex_in_disk(1.0);
    v.c = zero_centering ? cplx(0.0) : gen.complex_in_disk(1.0);
    return v;
}

AtomicMeasure random_circle_measure(DrawGen& gen) {
    const int k = static_cast<int>(gen.uniform_int(2, 4));
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        atoms.push_back({gen.uniform(0.0, 2.0 * std::numbers::pi), gen.uniform(0.2, 1.0)});
        total += atoms.back().weight;
    }
    for (Atom& a : atoms) a.weight /= total;
    return AtomicMeasure(MeasureDomain::circle, std::move(atoms));
}

// Circle measure with exactly zero first moment: equal weights on a rotated
// set of k-th roots of unity.
AtomicMeasure centered_circle_measure(DrawGen& gen) {
    const int k = static_cast<int>(gen.uniform_int(2, 4));
    const double theta0 = gen.uniform(0.0, 2.0 * std::numbers::pi);
    std::vector<Atom> atoms;
    for (int j = 0; j < k; ++j)
        atoms.push_back({theta0 + 2.0 * std::numbers::pi * j / k, 1.0 / k});
    return AtomicMeasure(MeasureDomain::circle, std::move(atoms));
}

// Half-line measure whose support straddles 1 (some mass at or below, some at
// or above), as the support-bound statement requires.
AtomicMeasure straddling_halfline_measure(DrawGen& gen) {
    const int k = static_cast<int>(gen.uniform_int(2, 4));
    std::vector<Atom> atoms;
    atoms.push_back({gen.uniform(0.0, 1.0), gen.uniform(0.2, 1.0)});
    atoms.push_back({gen.uniform(1.0, 3.0), gen.uniform(0.2, 1.0)});
    for (int i = 2; i < k; ++i)
        atoms.push_back({gen.uniform(0.0, 3.0), gen.uniform(0.2, 1.0)});
    double total = 0.0;
    for (const Atom& a : atoms) total += a.weight;
    for (Atom& a : atoms) a.weight /= total;
    return AtomicMeasure(MeasureDomain::half_line, std::move(atoms));
}

MomentSequence marginal(const ShiftPolyVariable& v, int order) {
    return MomentSequence(shift_poly_moments(v, kOracleDim, order));
}

CriterionResult pair_product_vs_oracle(std::uint64_t seed) {
    CriterionResult r{1, "pair product series matches the operator oracle", false, ""};
    DrawGen gen(seed);
    const int order = 8;
    double worst = 0.0;
    int zero_draws = 0;
    for (int draw = 0; draw < 20; ++draw) {
        const bool zero_c1 = draw % 7 == 0; // draws 0, 7, 14
        const ShiftPolyVariable v1 = random_variable(gen, zero_c1);
        const ShiftPolyVariable v2 = random_variable(gen, false);
        zero_draws += zero_c1 ? 1 : 0;

        const OperatorScene scene = realize_pair(v1, v2, kOracleDim);
        const std::vector<cplx> oracle = oracle_moments(scene, {"x1", "x2"}, order);
        const ConvolutionPair prod = convolve_pair({marginal(v1, order), v1.c},
                                                   {marginal(v2, order), v2.c}, order);
        for (int n = 1; n <= order; ++n)
            worst = std::max(worst, std::abs(prod.dist.moment(n) - oracle[n - 1]));
    }
    r.pass = worst < kOracleTol && zero_draws >= 3;
    r.detail = "20 draws (" + std::to_string(zero_draws) +
               " with c1=0), worst moment error " + fmt(worst);
    return r;
}

CriterionResult moment_series_inverts_symbol(std::uint64_t seed) {
    CriterionResult r{2, "moment series is the compositional inverse of z/((1+z)u(z))",
                      false, ""};
    DrawGen gen(seed + 1);
    const int order = 10;
    double worst = 0.0;
    for (int draw = 0; draw < 10; ++draw) {
        const ShiftPolyVariable v = random_variable(gen, true);
        TruncatedSeries u(order);
        for (std::size_t k = 0; k < v.u.size(); ++k)
            u.set_coeff(static_cast<int>(k), v.u[k]);
        TruncatedSeries one_plus_z = TruncatedSeries::constant(1.0, order);
        one_plus_z.set_coeff(1, 1.0);
        const TruncatedSeries f =
            TruncatedSeries::identity(order) * (one_plus_z * u).reciprocal();
        const TruncatedSeries psi = compositional_inverse(f);

        const std::vector<cplx> m = shift_poly_moments(v, kOracleDim, order);
        for (int n = 1; n <= order; ++n)
            worst = std::max(worst, std::abs(psi.coeff(n) - m[n - 1]));
    }
    r.pass = worst < kOracleTol;
    r.detail = "10 draws through order 10, worst coefficient error " + fmt(worst);
    return r;
}

CriterionResult gamma_flow_closed_form(std::uint64_t seed) {
    CriterionResult r{3, "unit-rate half-line flow matches z/(1-tau z) and its atoms",
                      false, ""};
    const Generator g = Generator::half_line(0.0, {Atom{0.0, 1.0}});
    const double taus[3] = {0.25, 1.0, 2.0};
    DrawGen gen(seed + 2);

    double worst_pt = 0.0;
    for (int i = 0; i < 50; ++i) {
        const cplx z =
            std::polar(gen.uniform(0.1, 2.0),
                       gen.uniform(0.15, 2.0 * std::numbers::pi - 0.15));
        for (double tau : taus) {
            const cplx flowed = eta_value(g, ConvOp::mconv0, z, tau);
            const cplx exact = z / (1.0 - tau * z);
            worst_pt = std::max(worst_pt, std::abs(flowed - exact));
        }
    }

    // Series-level flow, then atom identification at every checkpoint.
    double worst_atom = 0.0;
    bool recovered = true;
    const std::vector<SemigroupPoint> pts =
        semigroup_measures(g, ConvOp::mconv0, taus, 16);
    for (const SemigroupPoint& p : pts) {
        if (!p.measure || p.measure->atoms().size() != 2) {
            recovered = false;
            continue;
        }
        const auto atoms = p.measure->atoms();
        const double gt = p.tau;
        worst_atom = std::max({worst_atom, std::abs(atoms[0].position - 0.0),
                               std::abs(atoms[0].weight - gt / (1.0 + gt)),
                               std::abs(atoms[1].position - (1.0 + gt)),
                               std::abs(atoms[1].weight - 1.0 / (1.0 + gt))});
    }
    r.pass = worst_pt < kFlowTol && recovered && worst_atom < kFlowTol;
    r.detail = "worst pointwise error " + fmt(worst_pt) + ", worst atom error " +
               (recovered ? fmt(worst_atom) : std::string("(recovery failed)"));
    return r;
}

CriterionResult circle_power_flow(std::uint64_t seed) {
    CriterionResult r{4, "circle power flow: semigroup law, scheme agreement, fitted constant",
                      false, ""};
    bool pass = true;
    std::string detail;
    for (int n = 1; n <= 2; ++n) {
        const Generator g = Generator::circle_power(n);
        DrawGen gen(seed + 3 + static_cast<std::uint64_t>(n));
        const FlowOptions rk_opts{};
        FlowOptions euler_opts{};
        euler_opts.scheme = Scheme::euler_exp;
        euler_opts.euler_substep = 1e-5;

        // The composition flow is not a disk self-map: for |z| <= 0.45 and
        // total time <= 1.0 the closed form keeps |u| <= 0.9 for n = 1, 2,
        // safely inside the integration domain.
        double worst_law = 0.0;
        for (int i = 0; i < 50; ++i) {
            const cplx z = gen.complex_in_annulus(0.15, 0.45);
            const double s = gen.uniform(0.1, 0.5);
            const double t = gen.uniform(0.1, 0.5);
            const cplx whole = increment_flow_value(g, z, s + t, rk_opts);
            const cplx staged =
                increment_flow_value(g, increment_flow_value(g, z, t, rk_opts), s, rk_opts);
            worst_law = std::max(worst_law, std::abs(whole - staged));
        }

        const double tau = 0.7;
        double worst_scheme = 0.0;
        cplx c_sum = 0.0;
        std::vector<cplx> zs, us;
        for (int i = 0; i < 50; ++i) {
            const cplx z = gen.complex_in_annulus(0.15, 0.45);
            const cplx u_rk = increment_flow_value(g, z, tau, rk_opts);
            const cplx u_euler = increment_flow_value(g, z, tau, euler_opts);
            worst_scheme = std::max(worst_scheme, std::abs(u_rk - u_euler));
            c_sum += (1.0 - std::pow(z / u_rk, n)) / (std::pow(z, n) * tau);
            zs.push_back(z);
            us.push_back(u_rk);
        }
        const cplx c_fit = c_sum / 50.0;

        // Residual of the one-parameter closed form with the fitted constant.
        double worst_resid = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            const cplx model =
                zs[i] * std::pow(1.0 - c_fit * std::pow(zs[i], n) * tau, -1.0 / n);
            worst_resid = std::max(worst_resid, std::abs(us[i] - model));
        }

        pass = pass && worst_law < kFlowTol && worst_scheme < kFlowTol &&
               worst_resid < kFlowTol;
        detail += "n=" + std::to_string(n) + ": constant " + fmt(c_fit.real()) +
                  (std::abs(c_fit.imag()) > 1e-9 ? "+" + fmt(c_fit.imag()) + "i" : "") +
                  ", law " + fmt(worst_law) + ", schemes " + fmt(worst_scheme) +
                  ", residual " + fmt(worst_resid) + (n == 1 ? "; " : "");
    }
    r.pass = pass;
    r.detail = detail;
    return r;
}

CriterionResult centered_factors_collapse(std::uint64_t seed) {
    CriterionResult r{5, "zero-mean circle factors convolve to the uniform measure",
                      false, ""};
    DrawGen gen(seed + 6);
    const AtomicMeasure mu1 = centered_circle_measure(gen);
    const AtomicMeasure mu2 = centered_circle_measure(gen);
    const MomentSequence m = mconv0(mu1, mu2, 16);
    double worst = 0.0;
    for (int n = 1; n <= 16; ++n) worst = std::max(worst, std::abs(m.moment(n)));
    r.pass = worst < kHaarTol;
    r.detail = "largest moment magnitude through order 16: " + fmt(worst);
    return r;
}

CriterionResult word_rearrangements(std::uint64_t seed) {
    CriterionResult r{6, "x1 x1 x2 word rearrangements share all moments", false, ""};
    DrawGen gen(seed + 7);
    const int order = 6, d = 32;
    const std::vector<std::string> w1{"x1", "x1", "x2"};
    const std::vector<std::string> w2{"x1", "x2", "x1"};
    const std::vector<std::string> w3{"x2", "x1", "x1"};
    double worst = 0.0;
    for (int draw = 0; draw < 10; ++draw) {
        const ShiftPolyVariable v1 = random_variable(gen, false);
        const ShiftPolyVariable v2 = random_variable(gen, false);
        const OperatorScene scene = realize_pair(v1, v2, d);
        const std::vector<cplx> a = oracle_moments(scene, w1, order);
        const std::vector<cplx> b = oracle_moments(scene, w2, order);
        const std::vector<cplx> c = oracle_moments(scene, w3, order);
        for (int n = 0; n < order; ++n)
            worst = std::max({worst, std::abs(a[n] - b[n]), std::abs(a[n] - c[n])});
    }
    r.pass = worst < kOracleTol;
    r.detail = "10 draws, orders <= 6, worst moment spread " + fmt(worst);
    return r;
}

CriterionResult support_bounds(std::uint64_t seed) {
    CriterionResult r{7, "product support bound caps moment growth for both convolutions",
                      false, ""};
    DrawGen gen(seed + 8);
    bool ok = true;
    double worst_margin = -1e300;
    for (int draw = 0; draw < 10; ++draw) {
        const AtomicMeasure mu1 = straddling_halfline_measure(gen);
        const AtomicMeasure mu2 = straddling_halfline_measure(gen);
        for (ConvOp op : {ConvOp::mconv, ConvOp::mconv0}) {
            const MomentSequence m = op == ConvOp::mconv ? mconv(mu1, mu2, 32)
                                                         : mconv0(mu1, mu2, 32);
            const SupportBoundsReport rep =
                support_bounds_check(mu1, mu2, m, std::nullopt, kSupportTol);
            ok = ok && rep.upper_ok;
            for (const SupportBoundsRow& row : rep.rows)
                worst_margin = std::max(worst_margin, row.root - row.bound);
        }
    }
    r.pass = ok;
    r.detail = "10 pairs, orders <= 32, worst m_n^(1/n) - b1 b2 = " + fmt(worst_margin);
    return r;
}

CriterionResult schur_contraction(std::uint64_t seed) {
    CriterionResult r{8, "convolved circle eta never exceeds |z|", false, ""};
    DrawGen gen(seed + 9);
    double worst = -1e300;
    for (int draw = 0; draw < 10; ++draw) {
        const AtomicMeasure mu1 = random_circle_measure(gen);
        const AtomicMeasure mu2 = random_circle_measure(gen);
        for (ConvOp op : {ConvOp::mconv, ConvOp::mconv0}) {
            for (int i = 0; i < 100; ++i) {
                const cplx z = gen.complex_in_disk(0.97);
                const cplx eta =
                    eval_convolved_eta(mu1, mu2, op, TransformPoint::disk(z));
                worst = std::max(worst, std::abs(eta) - std::abs(z));
            }
        }
    }
    r.pass = worst <= kSchurTol;
    r.detail = "10 pairs x 100 points x both ops, worst |eta|-|z| = " + fmt(worst);
    return r;
}

CriterionResult divisibility_example(std::uint64_t seed) {
    (void)seed; // fully deterministic example
    CriterionResult r{9, "depth-5 halving of (d_0 + d_2)/2 recomposes and hits tau=1/2",
                      false, ""};
    const int order = 32;
    const AtomicMeasure mu(MeasureDomain::half_line, {{0.0, 0.5}, {2.0, 0.5}});
    const MomentSequence m = moments(mu, order);
    const std::vector<MomentSequence> chain = divisibility_chain(m, ConvOp::mconv0, 5);

    // Explicit recomposition at every level, on the bounded eta coefficients.
    double worst_rec = 0.0;
    for (std::size_t level = 0; level + 1 < chain.size(); ++level) {
        const MomentSequence back = mconv0(chain[level + 1], chain[level + 1], order);
        const TruncatedSeries eta_back = eta_from_moments(back);
        const TruncatedSeries eta_parent = eta_from_moments(chain[level]);
        for (int n = 1; n <= order; ++n)
            worst_rec =
                std::max(worst_rec, std::abs(eta_back.coeff(n) - eta_parent.coeff(n)));
    }

    // The first halving is the tau = 1/2 point of the unit-rate flow.
    const AtomicMeasure half(MeasureDomain::half_line,
                             {{0.0, 1.0 / 3.0}, {1.5, 2.0 / 3.0}});
    const TruncatedSeries eta_half = eta_from_moments(moments(half, order));
    const TruncatedSeries eta_level1 = eta_from_moments(chain[1]);
    double worst_half = 0.0;
    for (int n = 1; n <= order; ++n)
        worst_half =
            std::max(worst_half, std::abs(eta_level1.coeff(n) - eta_half.coeff(n)));

    r.pass = worst_rec < kOracleTol && worst_half < kOracleTol;
    r.detail = "worst recomposition error " + fmt(worst_rec) +
               ", worst tau=1/2 mismatch " + fmt(worst_half);
    return r;
}

CriterionResult axiom_residuals(std::uint64_t seed) {
    CriterionResult r{10, "monotone independence axioms hold in the realization",
                      false, ""};
    DrawGen gen(seed + 10);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const ShiftPolyVariable v1 = random_variable(gen, i == 0);
        const ShiftPolyVariable v2 = random_variable(gen, false);
        const OperatorScene scene = realize_pair(v1, v2, 32);
        const AxiomReport rep = check_monotone_axioms(scene, 25, seed + 100 + i);
        worst = std::max(worst, rep.max_residual());
    }
    r.pass = worst < kAxiomTol;
    r.detail = "3 scenes x 25 trials at dimension 32, worst residual " + fmt(worst);
    return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
    using CriterionFn = CriterionResult (*)(std::uint64_t);
    constexpr CriterionFn criteria[] = {
        pair_product_vs_oracle, moment_series_inverts_symbol, gamma_flow_closed_form,
        circle_power_flow,      centered_factors_collapse,    word_rearrangements,
        support_bounds,         schur_contraction,            divisibility_example,
        axiom_residuals,
    };
    std::vector<CriterionResult> results;
    results.reserve(std::size(criteria));
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        try {
            results.push_back(criteria[i](seed));
        } catch (const Error& e) {
            results.push_back({static_cast<int>(i) + 1, "criterion threw", false,
                               std::string(e.code_name()) + ": " + e.what()});
        }
    }
    return results;
}

void print_results(const std::vector<CriterionResult>& results, std::ostream& out) {
    for (const CriterionResult& r : results)
        out << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name
            << " (" << r.detail << ")\n";
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const CriterionResult& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace monomul
