#include "monomul/convolution.hpp"

#include <cmath>

#include "monomul/errors.hpp"

namespace monomul {

namespace {

TruncatedSeries eta_at_order(const MomentSequence& m, int order) {
    if (m.order() < order)
        raise(ErrorCode::InvalidInput, "distribution has too few moments for this order");
    return eta_from_moments(m.order() == order ? m : m.truncated(order));
}

// Checks an intermediate composition point; by the time transforms are being
// composed, a point outside the domain is a numerical event, not a caller
// error, so domain failures surface as DomainEscape. (For valid inputs the
// Schur bound / ray preservation keep intermediates strictly interior.)
TransformPoint intermediate_point(MeasureDomain d, cplx w) {
    try {
        return TransformPoint::in_domain(d, w);
    } catch (const Error&) {
        raise(ErrorCode::DomainEscape, "intermediate point left the transform domain");
    }
}

} // namespace

ConvolutionPair convolve_pair(const ConvolutionPair& p1, const ConvolutionPair& p2,
                              int order) {
    const TruncatedSeries eta1 = eta_at_order(p1.dist, order);
    const TruncatedSeries eta2 = eta_at_order(p2.dist, order);

    TruncatedSeries inner(order);
    if (std::abs(p1.c) > kPairConstantTol) {
        // (1/c_1) eta_2(c_1 z): coefficient k picks up c_1^{k-1}.
        inner = eta2.rescale_argument(p1.c) * (1.0 / p1.c);
    } else {
        inner.set_coeff(1, eta2.linear_coeff());
    }
    const TruncatedSeries eta = compose(eta1, inner);
    return ConvolutionPair{moments_from_eta(eta), p1.c * p2.c};
}

MomentSequence mconv(const MomentSequence& m1, const MomentSequence& m2, int order) {
    return convolve_pair({m1, 1.0}, {m2, 1.0}, order).dist;
}

MomentSequence mconv0(const MomentSequence& m1, const MomentSequence& m2, int order) {
    if (m1.order() < 1 || m2.order() < 1)
        raise(ErrorCode::InvalidInput, "need at least the first moment");
    return convolve_pair({m1, m1.moment(1)}, {m2, m2.moment(1)}, order).dist;
}

MomentSequence mconv(const AtomicMeasure& mu1, const AtomicMeasure& mu2, int order) {
    return mconv(moments(mu1, order), moments(mu2, order), order);
}

MomentSequence mconv0(const AtomicMeasure& mu1, const AtomicMeasure& mu2, int order) {
    return mconv0(moments(mu1, order), moments(mu2, order), order);
}

cplx eval_convolved_eta(const AtomicMeasure& mu1, const AtomicMeasure& mu2, ConvOp op,
                        const TransformPoint& z) {
    const MeasureDomain d = z.domain();
    const cplx c1 = op == ConvOp::mconv ? cplx(1.0) : mu1.first_moment();
    cplx w;
    if (std::abs(c1) > kPairConstantTol) {
        const cplx inner_arg = c1 * z.value();
        w = eval_eta(mu2, intermediate_point(d, inner_arg)) / c1;
    } else {
        // Derivative branch: eta_2'(0) equals the first moment of mu_2.
        w = mu2.first_moment() * z.value();
    }
    return eval_eta(mu1, intermediate_point(d, w));
}

SupportBoundsReport support_bounds_check(const AtomicMeasure& mu1, const AtomicMeasure& mu2,
                                         const MomentSequence& result,
                                         std::optional<double> lower_witness, double tol) {
    if (mu1.domain() != MeasureDomain::half_line || mu2.domain() != MeasureDomain::half_line)
        raise(ErrorCode::InvalidInput, "support bounds apply to half-line measures");
    const double bound = mu1.max_position() * mu2.max_position();
    SupportBoundsReport report;
    report.rows.reserve(static_cast<std::size_t>(result.order()));
    for (int n = 1; n <= result.order(); ++n) {
        const cplx mn = result.moment(n);
        const double root = std::pow(std::abs(mn), 1.0 / static_cast<double>(n));
        const bool ok = root <= bound + tol;
        report.rows.push_back(SupportBoundsRow{n, root, bound, ok});
        report.upper_ok = report.upper_ok && ok;
    }
    if (lower_witness) {
        report.lower_witness = lower_witness;
        report.lower_value = report.rows.back().root;
        report.lower_ok = *report.lower_value >= *lower_witness - tol;
    }
    return report;
}

} // namespace monomul
