#pragma once

#include <optional>

#include "monomul/measures.hpp"
#include "monomul/series.hpp"

// Multiplicative monotone convolution via eta-transform composition.
//
// For pairs (mu_1, c_1), (mu_2, c_2) the convolved eta-transform is
//   eta(z) = eta_1((1/c_1) eta_2(c_1 z))        when c_1 != 0,
//   eta(z) = eta_1(eta_2'(0) z)                 when c_1 = 0,
// with the pair constant multiplying: c = c_1 c_2. The plain convolution
// takes c_1 = c_2 = 1 (eta composition); the forward-increment variant uses
// each factor's first moment as its constant.

namespace monomul {

enum class ConvOp { mconv, mconv0 };

struct ConvolutionPair {
    MomentSequence dist;
    cplx c = 1.0;
};

// Threshold below which the pair constant takes the derivative branch.
inline constexpr double kPairConstantTol = 1e-12;

ConvolutionPair convolve_pair(const ConvolutionPair& p1, const ConvolutionPair& p2,
                              int order);

MomentSequence mconv(const MomentSequence& m1, const MomentSequence& m2, int order);
MomentSequence mconv0(const MomentSequence& m1, const MomentSequence& m2, int order);
MomentSequence mconv(const AtomicMeasure& mu1, const AtomicMeasure& mu2, int order);
MomentSequence mconv0(const AtomicMeasure& mu1, const AtomicMeasure& mu2, int order);

// Pointwise evaluation of the convolved eta at a transform point, without any
// series truncation. Throws DomainEscape if an intermediate value leaves the
// transform domain by more than 1e-12.
cplx eval_convolved_eta(const AtomicMeasure& mu1, const AtomicMeasure& mu2, ConvOp op,
                        const TransformPoint& z);

// Moment-growth check of the product support bound: for half-line factors
// with min/max supports [a_j, b_j], every m_n^{1/n} of the convolution must
// stay below b_1 b_2 (+tol). An optional exact witness value checks the
// lower end: m_N^{1/N} >= witness.
struct SupportBoundsRow {
    int n;
    double root;  // m_n^{1/n}
    double bound; // b_1 * b_2
    bool ok;
};

struct SupportBoundsReport {
    std::vector<SupportBoundsRow> rows;
    bool upper_ok = true;
    std::optional<double> lower_witness;
    std::optional<double> lower_value; // m_N^{1/N}
    bool lower_ok = true;
    bool all_ok() const { return upper_ok && lower_ok; }
};

SupportBoundsReport support_bounds_check(const AtomicMeasure& mu1, const AtomicMeasure& mu2,
                                         const MomentSequence& result,
                                         std::optional<double> lower_witness = std::nullopt,
                                         double tol = 1e-6);

} // namespace monomul
