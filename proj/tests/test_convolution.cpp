#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "monomul/convolution.hpp"
#include "monomul/errors.hpp"
#include "monomul/measures.hpp"
#include "monomul/operator_model.hpp"
#include "monomul/rng.hpp"

using namespace monomul;

namespace {

constexpr double kPi = std::numbers::pi;

double max_moment_diff(const MomentSequence& a, const MomentSequence& b) {
    REQUIRE(a.order() == b.order());
    double m = 0.0;
    for (int n = 1; n <= a.order(); ++n) m = std::max(m, std::abs(a.moment(n) - b.moment(n)));
    return m;
}

AtomicMeasure random_halfline(DrawGen& gen, double hi) {
    const int k = static_cast<int>(gen.uniform_int(1, 4));
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        atoms.push_back({gen.uniform(0.0, hi), gen.uniform(0.2, 1.0)});
        total += atoms.back().weight;
    }
    for (Atom& a : atoms) a.weight /= total;
    return AtomicMeasure(MeasureDomain::half_line, std::move(atoms));
}

AtomicMeasure random_circle(DrawGen& gen) {
    const int k = static_cast<int>(gen.uniform_int(1, 4));
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        atoms.push_back({gen.uniform(0.0, 2.0 * kPi), gen.uniform(0.2, 1.0)});
        total += atoms.back().weight;
    }
    for (Atom& a : atoms) a.weight /= total;
    return AtomicMeasure(MeasureDomain::circle, std::move(atoms));
}

} // namespace

TEST_CASE("the point mass at 1 is neutral on both sides") {
    const AtomicMeasure one = AtomicMeasure::point_mass(MeasureDomain::half_line, 1.0);
    DrawGen gen(41);
    const AtomicMeasure mu = random_halfline(gen, 3.0);
    const MomentSequence m = moments(mu, 10);
    double scale = 1.0;
    for (int n = 1; n <= 10; ++n) scale = std::max(scale, std::abs(m.moment(n)));
    CHECK(max_moment_diff(mconv(one, mu, 10), m) < 1e-12 * scale);
    CHECK(max_moment_diff(mconv(mu, one, 10), m) < 1e-12 * scale);
    CHECK(max_moment_diff(mconv0(one, mu, 10), m) < 1e-12 * scale);
    CHECK(max_moment_diff(mconv0(mu, one, 10), m) < 1e-12 * scale);
}

TEST_CASE("self-convolution of (d_0 + d_2)/2 has moments 3^(n-1)") {
    const AtomicMeasure mix(MeasureDomain::half_line, {{0.0, 0.5}, {2.0, 0.5}});
    for (auto op : {ConvOp::mconv, ConvOp::mconv0}) {
        const MomentSequence m = op == ConvOp::mconv ? mconv(mix, mix, 10)
                                                     : mconv0(mix, mix, 10);
        for (int n = 1; n <= 10; ++n)
            CHECK(std::abs(m.moment(n) - std::pow(3.0, n - 1)) < 1e-9);

        const auto rec = try_prony_recover(m, MeasureDomain::half_line);
        REQUIRE(rec.has_value());
        REQUIRE(rec->atoms().size() == 2);
        CHECK(std::abs(rec->atoms()[0].position - 0.0) < 1e-9);
        CHECK(std::abs(rec->atoms()[0].weight - 2.0 / 3.0) < 1e-9);
        CHECK(std::abs(rec->atoms()[1].position - 3.0) < 1e-9);
        CHECK(std::abs(rec->atoms()[1].weight - 1.0 / 3.0) < 1e-9);
    }
}

TEST_CASE("uniform two-point circle measure squares to the four-point one") {
    const AtomicMeasure two(MeasureDomain::circle, {{0.0, 0.5}, {kPi, 0.5}});
    const MomentSequence m = mconv(two, two, 12);
    for (int n = 1; n <= 12; ++n) {
        const double expected = n % 4 == 0 ? 1.0 : 0.0;
        CHECK(std::abs(m.moment(n) - expected) < 1e-12);
    }
    const auto rec = try_prony_recover(m, MeasureDomain::circle);
    REQUIRE(rec.has_value());
    REQUIRE(rec->atoms().size() == 4);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(std::abs(rec->atoms()[j].position - j * kPi / 2.0) < 1e-9);
        CHECK(std::abs(rec->atoms()[j].weight - 0.25) < 1e-9);
    }
}

TEST_CASE("a vanishing composition constant dilates the left factor") {
    DrawGen gen(42);
    const AtomicMeasure mu1 = random_circle(gen);
    const AtomicMeasure mu2 = random_circle(gen);
    const int order = 10;
    const MomentSequence m1 = moments(mu1, order);
    const cplx alpha = mu2.first_moment();

    const ConvolutionPair out =
        convolve_pair({m1, cplx(0.0)}, {moments(mu2, order), cplx(0.7, 0.1)}, order);
    cplx p = 1.0;
    for (int n = 1; n <= order; ++n) {
        p *= alpha;
        CHECK(std::abs(out.dist.moment(n) - m1.moment(n) * p) < 1e-12);
    }
    CHECK(std::abs(out.c) < 1e-15); // c1 * c2
}

TEST_CASE("the convolutions are not commutative") {
    const AtomicMeasure mix(MeasureDomain::half_line, {{0.0, 0.5}, {2.0, 0.5}});
    const AtomicMeasure d2 = AtomicMeasure::point_mass(MeasureDomain::half_line, 2.0);
    CHECK(max_moment_diff(mconv(mix, d2, 8), mconv(d2, mix, 8)) > 0.1);

    // a point mass only dilates in the forward-increment convolution, so it
    // commutes with everything; a genuine two-atom partner splits at order 4
    CHECK(max_moment_diff(mconv0(mix, d2, 8), mconv0(d2, mix, 8)) < 1e-10);
    const AtomicMeasure nu(MeasureDomain::half_line, {{1.0, 0.5}, {3.0, 0.5}});
    CHECK(max_moment_diff(mconv0(mix, nu, 8), mconv0(nu, mix, 8)) > 0.1);
}

TEST_CASE("support bounds hold with a lower witness") {
    const AtomicMeasure mix(MeasureDomain::half_line, {{0.0, 0.5}, {2.0, 0.5}});
    const MomentSequence m = mconv(mix, mix, 32);
    const SupportBoundsReport rep = support_bounds_check(mix, mix, m, 2.0);
    CHECK(rep.all_ok());
    CHECK(rep.rows.size() == 32);
    for (const SupportBoundsRow& row : rep.rows) {
        CHECK(row.bound == 4.0);
        CHECK(row.ok);
    }
    REQUIRE(rep.lower_value.has_value());
    CHECK(*rep.lower_value > 2.0); // m_32^(1/32) is already close to max support 3
}

TEST_CASE("pair convolution agrees with the operator oracle") {
    DrawGen gen(43);
    const int order = 8, d = 34;
    for (int draw = 0; draw < 3; ++draw) {
        ShiftPolyVariable v1, v2;
        v1.u = {gen.complex_in_annulus(0.5, 1.0), gen.complex_in_disk(1.0)};
        v1.c = gen.complex_in_disk(1.0);
        v2.u = {gen.complex_in_annulus(0.5, 1.0), gen.complex_in_disk(1.0),
                gen.complex_in_disk(1.0)};
        v2.c = gen.complex_in_disk(1.0);

        const OperatorScene scene = realize_pair(v1, v2, d);
        const std::vector<cplx> oracle = oracle_moments(scene, {"x1", "x2"}, order);
        const ConvolutionPair pred =
            convolve_pair({MomentSequence(shift_poly_moments(v1, d, order)), v1.c},
                          {MomentSequence(shift_poly_moments(v2, d, order)), v2.c}, order);
        for (int n = 1; n <= order; ++n)
            CHECK(std::abs(pred.dist.moment(n) - oracle[n - 1]) < 1e-9);
    }
}

TEST_CASE("series moments match the pointwise convolved eta at small arguments") {
    DrawGen gen(44);
    const int order = 16;
    const AtomicMeasure c1 = random_circle(gen), c2 = random_circle(gen);
    const AtomicMeasure h1 = random_halfline(gen, 2.0), h2 = random_halfline(gen, 2.0);

    const auto check_pair = [order](const AtomicMeasure& a, const AtomicMeasure& b,
                                    cplx z) {
        for (auto op : {ConvOp::mconv, ConvOp::mconv0}) {
            const MomentSequence m =
                op == ConvOp::mconv ? mconv(a, b, order) : mconv0(a, b, order);
            const TruncatedSeries eta = eta_from_moments(m);
            cplx series_val = 0.0;
            for (int n = order; n >= 1; --n) series_val = (series_val + eta.coeff(n)) * z;
            const cplx pointwise =
                eval_convolved_eta(a, b, op, TransformPoint::in_domain(a.domain(), z));
            CHECK(std::abs(series_val - pointwise) < 1e-10);
        }
    };
    check_pair(c1, c2, cplx(0.08, 0.05));
    check_pair(h1, h2, cplx(-0.06, 0.07));
}

TEST_CASE("convolution input validation") {
    const AtomicMeasure mix(MeasureDomain::half_line, {{0.0, 0.5}, {2.0, 0.5}});
    const MomentSequence m = moments(mix, 4);
    CHECK_THROWS_AS(mconv(m, m, 10), const Error&); // order exceeds stored moments
    CHECK_THROWS_AS(support_bounds_check(
                        AtomicMeasure::point_mass(MeasureDomain::circle, 0.0),
                        AtomicMeasure::point_mass(MeasureDomain::circle, 0.0), m),
                    const Error&);
}
