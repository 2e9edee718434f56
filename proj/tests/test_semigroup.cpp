#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "monomul/convolution.hpp"
#include "monomul/errors.hpp"
#include "monomul/measures.hpp"
#include "monomul/rng.hpp"
#include "monomul/semigroup.hpp"

using namespace monomul;

namespace {

constexpr double kPi = std::numbers::pi;

Generator gamma_generator() { return Generator::half_line(0.0, {Atom{0.0, 1.0}}); }

Generator mixed_halfline_generator() {
    return Generator::half_line(0.3, {Atom{0.5, 0.4}, Atom{1.5, 0.6}});
}

Generator mixed_circle_generator() {
    return Generator::circle(0.4, {Atom{1.0, 0.3}, Atom{4.0, 0.5}});
}

} // namespace

TEST_CASE("generator values and series agree") {
    DrawGen gen(61);
    for (const Generator& g :
         {gamma_generator(), mixed_halfline_generator(), mixed_circle_generator(),
          Generator::circle_power(2)}) {
        const TruncatedSeries b = g.B_full_series(24);
        CHECK(std::abs(b.constant_term() - g.drift()) < 1e-14);
        for (int i = 0; i < 10; ++i) {
            const cplx z = gen.complex_in_disk(0.2); // inside every pole radius
            cplx series_val = 0.0;
            for (int n = 24; n >= 0; --n) series_val = series_val * z + b.coeff(n);
            CHECK(std::abs(series_val - g.B_full(z)) < 1e-9);
        }
    }
}

TEST_CASE("generators validate on their domains") {
    for (const Generator& g : {gamma_generator(), mixed_halfline_generator()}) {
        const GeneratorValidation v = validate_generator(g);
        CHECK(v.ok);
        CHECK(v.worst_sign_violation <= 1e-10);
        CHECK(v.worst_symmetry_violation <= 1e-10);
    }
    for (const Generator& g : {mixed_circle_generator(), Generator::circle_power(1),
                               Generator::circle_power(2)}) {
        CHECK(validate_generator(g).ok);
    }
    CHECK_THROWS_AS(Generator::half_line(0.0, {Atom{-1.0, 1.0}}), const Error&);
    CHECK_THROWS_AS(Generator::half_line(0.0, {Atom{1.0, -1.0}}), const Error&);
    CHECK_THROWS_AS(Generator::circle_power(0), const Error&);
}

TEST_CASE("half-line generators classify into the three flow types") {
    const HalflineClassification zero = classify_halfline_generator(gamma_generator());
    CHECK(zero.flow_class == HalflineFlowClass::denjoy_wolff_zero);

    const HalflineClassification inf_class =
        classify_halfline_generator(Generator::half_line(0.5, {}));
    CHECK(inf_class.flow_class == HalflineFlowClass::denjoy_wolff_infinity);

    // B(x) = 1 + 2x/(1-x) vanishes at x = -1
    const HalflineClassification interior =
        classify_halfline_generator(Generator::half_line(1.0, {Atom{1.0, 2.0}}));
    REQUIRE(interior.flow_class == HalflineFlowClass::interior_fixed_point);
    REQUIRE(interior.fixed_point.has_value());
    CHECK(std::abs(*interior.fixed_point + 1.0) < 1e-9);

    // an atom at zero forces a sign change: B(x) = 1 + 2x has root -1/2
    const HalflineClassification atom0 =
        classify_halfline_generator(Generator::half_line(1.0, {Atom{0.0, 2.0}}));
    REQUIRE(atom0.flow_class == HalflineFlowClass::interior_fixed_point);
    CHECK(std::abs(*atom0.fixed_point + 0.5) < 1e-9);

    CHECK_THROWS_AS(classify_halfline_generator(Generator::circle_power(1)), const Error&);
}

TEST_CASE("unit-rate flow hits its closed form") {
    const Generator g = gamma_generator();
    CHECK(std::abs(eta_value(g, ConvOp::mconv0, cplx(-1.0, 0.0), 1.0) - cplx(-0.5, 0.0)) <
          1e-8);
    // tau = 0 is the identity
    const cplx z0(-0.7, 0.4);
    CHECK(std::abs(eta_value(g, ConvOp::mconv0, z0, 0.0) - z0) < 1e-14);
    CHECK(std::abs(eta_value(g, ConvOp::mconv, z0, 0.0) - z0) < 1e-14);
}

TEST_CASE("builtin circle flow matches its closed form") {
    const Generator g = Generator::circle_power(1);
    // increment flow of z -> z/(1 - z tau) at z = 0.4, tau = 0.3
    const cplx u = increment_flow_value(g, cplx(0.4, 0.0), 0.3);
    CHECK(std::abs(u - cplx(0.4 / 0.88, 0.0)) < 1e-8);
}

TEST_CASE("flows obey the semigroup laws of both convolutions") {
    DrawGen gen(62);
    const double s = 0.3, t = 0.5;
    for (const Generator& g : {mixed_halfline_generator(), mixed_circle_generator()}) {
        const bool half = g.domain() == MeasureDomain::half_line;
        const cplx a = g.drift();
        for (int i = 0; i < 8; ++i) {
            const cplx z = half ? std::polar(gen.uniform(0.2, 1.0),
                                             gen.uniform(0.4, 2.0 * kPi - 0.4))
                                : gen.complex_in_disk(0.8);

            // plain convolution: eta_{s+t} = eta_s o eta_t
            const cplx plain_whole = eta_value(g, ConvOp::mconv, z, s + t);
            const cplx plain_staged =
                eta_value(g, ConvOp::mconv, eta_value(g, ConvOp::mconv, z, t), s);
            CHECK(std::abs(plain_whole - plain_staged) < 1e-6);

            // forward-increment: eta_{s+t}(z) = eta_s(c_s^{-1} eta_t(c_s z)),
            // with c_s = exp(a s) the first moment at time s
            const cplx cs = std::exp(a * s);
            const cplx incr_whole = eta_value(g, ConvOp::mconv0, z, s + t);
            const cplx incr_staged =
                eta_value(g, ConvOp::mconv0,
                          eta_value(g, ConvOp::mconv0, cs * z, t) / cs, s);
            CHECK(std::abs(incr_whole - incr_staged) < 1e-6);
        }
    }
}

TEST_CASE("integration schemes agree at fine euler steps and disagree at coarse ones") {
    const Generator g = mixed_halfline_generator();
    const cplx z(-0.8, 0.5);

    FlowOptions fine;
    fine.scheme = Scheme::crosscheck;
    fine.euler_substep = 1e-5;
    CHECK_NOTHROW(eta_value(g, ConvOp::mconv0, z, 0.8, fine));
    CHECK_NOTHROW(eta_value(g, ConvOp::mconv, z, 0.8, fine));

    FlowOptions coarse;
    coarse.scheme = Scheme::crosscheck;
    coarse.euler_substep = 0.2;
    bool disagreed = false;
    try {
        eta_value(g, ConvOp::mconv0, z, 0.8, coarse);
    } catch (const Error& e) {
        disagreed = e.code() == ErrorCode::SchemeDisagreement;
    }
    CHECK(disagreed);
}

TEST_CASE("upper half-plane arguments never decrease along the flow") {
    for (const Generator& g : {gamma_generator(), mixed_halfline_generator()}) {
        for (const cplx z : {cplx(-0.5, 0.4), cplx(0.3, 0.6), cplx(-1.2, 0.1)}) {
            const std::vector<double> taus = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
            const std::vector<FlowSample> traj =
                integrate_flow(g, ConvOp::mconv0, z, taus);
            for (std::size_t i = 1; i < traj.size(); ++i)
                CHECK(std::arg(traj[i].value) >= std::arg(traj[i - 1].value) - 1e-9);
        }
    }
}

TEST_CASE("series flow carries the first moment exp(a tau)") {
    for (const Generator& g : {mixed_halfline_generator(), mixed_circle_generator()}) {
        const std::vector<double> taus = {0.5, 1.0};
        for (ConvOp op : {ConvOp::mconv, ConvOp::mconv0}) {
            const auto pts = semigroup_measures(g, op, taus, 8);
            for (const SemigroupPoint& p : pts)
                CHECK(std::abs(p.eta.linear_coeff() - std::exp(g.drift() * p.tau)) < 1e-8);
        }
    }
}

TEST_CASE("finite differences of the flow recover the generator field") {
    const double h = 1e-5;
    for (const Generator& g : {mixed_halfline_generator(), mixed_circle_generator()}) {
        const bool half = g.domain() == MeasureDomain::half_line;
        const cplx z = half ? cplx(-0.6, 0.4) : cplx(0.3, 0.2);
        // plain flow: d/dtau eta_tau(z) at 0 is z B(z)
        const cplx fd = (eta_value(g, ConvOp::mconv, z, h) - z) / h;
        CHECK(std::abs(fd - z * g.B_full(z)) < 1e-4);
        // increment flow: field z (B(z) - a)
        const cplx fd0 = (increment_flow_value(g, z, h) - z) / h;
        CHECK(std::abs(fd0 - z * (g.B_full(z) - g.drift())) < 1e-4);
    }
}

TEST_CASE("unit-rate series flow identifies its measures at each checkpoint") {
    const Generator g = gamma_generator();
    const std::vector<double> taus = {0.0, 1.0};
    const auto pts = semigroup_measures(g, ConvOp::mconv0, taus, 16);
    REQUIRE(pts.size() == 2);

    REQUIRE(pts[0].measure.has_value());
    REQUIRE(pts[0].measure->atoms().size() == 1);
    CHECK(std::abs(pts[0].measure->atoms()[0].position - 1.0) < 1e-9);

    REQUIRE(pts[1].measure.has_value());
    const auto atoms = pts[1].measure->atoms();
    REQUIRE(atoms.size() == 2);
    CHECK(std::abs(atoms[0].position - 0.0) < 1e-7);
    CHECK(std::abs(atoms[0].weight - 0.5) < 1e-7);
    CHECK(std::abs(atoms[1].position - 2.0) < 1e-7);
    CHECK(std::abs(atoms[1].weight - 0.5) < 1e-7);
}

TEST_CASE("long-time circle flow decays to the uniform measure") {
    const Generator g = Generator::circle_power(1);
    const std::vector<double> taus = {50.0};
    const auto pts = semigroup_measures(g, ConvOp::mconv0, taus, 16);
    REQUIRE(pts.size() == 1);
    double worst = 0.0;
    for (int n = 1; n <= 16; ++n) worst = std::max(worst, std::abs(pts[0].moments.moment(n)));
    CHECK(worst < 1e-6);
    CHECK_FALSE(pts[0].measure.has_value());
}

TEST_CASE("divisibility chains recompose under both convolutions") {
    const AtomicMeasure mix(MeasureDomain::half_line, {{0.0, 0.5}, {2.0, 0.5}});
    const MomentSequence m = moments(mix, 32);
    for (ConvOp op : {ConvOp::mconv, ConvOp::mconv0}) {
        const auto chain = divisibility_chain(m, op, 5);
        REQUIRE(chain.size() == 6);
        for (std::size_t level = 0; level + 1 < chain.size(); ++level) {
            const MomentSequence back = op == ConvOp::mconv
                                            ? mconv(chain[level + 1], chain[level + 1], 32)
                                            : mconv0(chain[level + 1], chain[level + 1], 32);
            for (int n = 1; n <= 32; ++n) {
                const double scale = std::max(1.0, std::abs(chain[level].moment(n)));
                CHECK(std::abs(back.moment(n) - chain[level].moment(n)) < 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("circle roots take the principal square root of the first moment") {
    const AtomicMeasure mu(MeasureDomain::circle, {{0.7, 0.6}, {2.1, 0.4}});
    const MomentSequence m = moments(mu, 12);
    for (ConvOp op : {ConvOp::mconv, ConvOp::mconv0}) {
        const auto chain = divisibility_chain(m, op, 1);
        CHECK(std::abs(chain[1].moment(1) - std::pow(m.moment(1), 0.5)) < 1e-10);
    }
}

TEST_CASE("flow and chain input validation") {
    const Generator g = gamma_generator();
    const std::vector<double> bad_order = {1.0, 0.5};
    CHECK_THROWS_AS(integrate_flow(g, ConvOp::mconv0, cplx(-1.0, 0.0), bad_order),
                    const Error&);
    CHECK_THROWS_AS(eta_value(g, ConvOp::mconv0, cplx(-1.0, 0.0), -0.5), const Error&);
    CHECK_THROWS_AS(eta_value(g, ConvOp::mconv0, cplx(0.5, 0.0), 1.0), const Error&);

    const MomentSequence haar_moments(std::vector<cplx>(8, cplx(0.0)));
    CHECK_THROWS_AS(divisibility_chain(haar_moments, ConvOp::mconv0, 2), const Error&);
}
