#include "monomul/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monomul/errors.hpp"
#include "monomul/kernels.hpp"

namespace monomul {

namespace {

constexpr double kZeroConstTol = 1e-14;   // "has zero constant term" slack
constexpr double kSingularTol = 1e-12;    // linear-term invertibility floor

void require_same_order(const TruncatedSeries& a, const TruncatedSeries& b,
                        const char* what) {
    if (a.order() != b.order())
        raise(ErrorCode::InvalidInput, std::string(what) + ": series orders differ");
}

} // namespace

TruncatedSeries::TruncatedSeries(int order) {
    if (order < 1) raise(ErrorCode::InvalidInput, "series order must be >= 1");
    data_.assign(static_cast<std::size_t>(order) + 1, cplx(0.0));
}

TruncatedSeries TruncatedSeries::identity(int order) {
    TruncatedSeries s(order);
    s.data_[1] = 1.0;
    return s;
}

TruncatedSeries TruncatedSeries::constant(cplx c0, int order) {
    TruncatedSeries s(order);
    s.data_[0] = c0;
    return s;
}

TruncatedSeries TruncatedSeries::from_coeffs(cplx c0, std::span<const cplx> tail) {
    TruncatedSeries s(static_cast<int>(tail.size()));
    s.data_[0] = c0;
    std::copy(tail.begin(), tail.end(), s.data_.begin() + 1);
    return s;
}

cplx TruncatedSeries::coeff(int n) const {
    if (n < 0 || n > order()) raise(ErrorCode::InvalidInput, "coefficient index out of range");
    return data_[static_cast<std::size_t>(n)];
}

void TruncatedSeries::set_coeff(int n, cplx value) {
    if (n < 0 || n > order()) raise(ErrorCode::InvalidInput, "coefficient index out of range");
    data_[static_cast<std::size_t>(n)] = value;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& rhs) {
    require_same_order(*this, rhs, "add");
    kernels::axpy(data_.data(), 1.0, rhs.data_.data(), data_.size());
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& rhs) {
    require_same_order(*this, rhs, "subtract");
    kernels::axpy(data_.data(), -1.0, rhs.data_.data(), data_.size());
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(cplx scalar) {
    kernels::scale(data_.data(), scalar, data_.size());
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_order(a, b, "multiply");
    TruncatedSeries out(a.order());
    kernels::conv_trunc(out.data_.data(), a.data_.data(), b.data_.data(), out.data_.size());
    return out;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
    if (std::abs(data_[0]) <= kSingularTol)
        raise(ErrorCode::InvalidInput, "reciprocal requires a nonzero constant term");
    TruncatedSeries out(order());
    auto& b = out.data_;
    b[0] = 1.0 / data_[0];
    for (std::size_t k = 1; k < data_.size(); ++k) {
        cplx acc = 0.0;
        for (std::size_t i = 1; i <= k; ++i) acc += data_[i] * b[k - i];
        b[k] = -acc / data_[0];
    }
    return out;
}

TruncatedSeries TruncatedSeries::rescale_argument(cplx c) const {
    TruncatedSeries out = *this;
    cplx p = 1.0;
    for (int n = 1; n <= order(); ++n) {
        p *= c;
        out.data_[static_cast<std::size_t>(n)] *= p;
    }
    return out;
}

TruncatedSeries TruncatedSeries::exp_zero_constant() const {
    if (std::abs(data_[0]) > kZeroConstTol)
        raise(ErrorCode::InvalidInput, "exp requires a zero constant term");
    TruncatedSeries out(order());
    auto& e = out.data_;
    e[0] = 1.0;
    // e' = f' e  =>  k e_k = sum_{j=1..k} j f_j e_{k-j}
    for (int k = 1; k <= order(); ++k) {
        cplx acc = 0.0;
        for (int j = 1; j <= k; ++j)
            acc += static_cast<double>(j) * data_[static_cast<std::size_t>(j)] *
                   e[static_cast<std::size_t>(k - j)];
        e[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
    }
    return out;
}

double TruncatedSeries::max_abs() const {
    double m = 0.0;
    for (const cplx& c : data_) m = std::max(m, std::abs(c));
    return m;
}

cplx MomentSequence::moment(int n) const {
    if (n < 1 || n > order()) raise(ErrorCode::InvalidInput, "moment index out of range");
    return m_[static_cast<std::size_t>(n - 1)];
}

MomentSequence MomentSequence::dilate(cplx c) const {
    MomentSequence out = *this;
    cplx p = 1.0;
    for (auto& v : out.m_) {
        p *= c;
        v *= p;
    }
    return out;
}

MomentSequence MomentSequence::truncated(int order) const {
    if (order < 1 || order > this->order())
        raise(ErrorCode::InvalidInput, "truncation order out of range");
    return MomentSequence(std::vector<cplx>(m_.begin(), m_.begin() + order));
}

TruncatedSeries psi_from_moments(const MomentSequence& m) {
    if (m.order() < 1) raise(ErrorCode::InvalidInput, "empty moment sequence");
    return TruncatedSeries::from_coeffs(0.0, m.all());
}

MomentSequence moments_from_psi(const TruncatedSeries& psi) {
    auto t = psi.tail();
    return MomentSequence(std::vector<cplx>(t.begin(), t.end()));
}

TruncatedSeries eta_from_psi(const TruncatedSeries& psi) {
    if (std::abs(psi.constant_term()) > kZeroConstTol)
        raise(ErrorCode::InvalidInput, "psi must have zero constant term");
    TruncatedSeries denom = psi;
    denom.set_coeff(0, psi.constant_term() + 1.0);
    return psi * denom.reciprocal();
}

TruncatedSeries psi_from_eta(const TruncatedSeries& eta) {
    if (std::abs(eta.constant_term()) > kZeroConstTol)
        raise(ErrorCode::InvalidInput, "eta must have zero constant term");
    TruncatedSeries denom = eta * cplx(-1.0);
    denom.set_coeff(0, denom.constant_term() + 1.0);
    return eta * denom.reciprocal();
}

MomentSequence moments_from_eta(const TruncatedSeries& eta) {
    return moments_from_psi(psi_from_eta(eta));
}

TruncatedSeries eta_from_moments(const MomentSequence& m) {
    return eta_from_psi(psi_from_moments(m));
}

TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g) {
    require_same_order(f, g, "compose");
    if (std::abs(g.constant_term()) > kZeroConstTol)
        raise(ErrorCode::InvalidInput, "compose requires the inner series to vanish at 0");
    TruncatedSeries inner = g;
    inner.set_coeff(0, 0.0);
    const int N = f.order();
    // Horner: r = f_N; r = r*g + f_k for k = N-1 .. 0.
    TruncatedSeries r = TruncatedSeries::constant(f.coeff(N), N);
    for (int k = N - 1; k >= 0; --k) {
        r = r * inner;
        r.set_coeff(0, r.constant_term() + f.coeff(k));
    }
    return r;
}

TruncatedSeries compositional_inverse(const TruncatedSeries& f) {
    if (std::abs(f.constant_term()) > kZeroConstTol)
        raise(ErrorCode::InvalidInput, "compositional inverse requires f(0) = 0");
    const cplx lambda = f.linear_coeff();
    if (std::abs(lambda) <= kSingularTol)
        raise(ErrorCode::SingularLinearTerm, "linear term too small to invert");
    const int N = f.order();
    TruncatedSeries g(N);
    g.set_coeff(1, 1.0 / lambda);
    // Order-by-order: with g fixed through order n-1 and g_n = 0, the n-th
    // coefficient of f(g) is off by exactly lambda * g_n.
    for (int n = 2; n <= N; ++n) {
        TruncatedSeries h = compose(f, g);
        g.set_coeff(n, -h.coeff(n) / lambda);
    }
    return g;
}

TruncatedSeries compositional_root(const TruncatedSeries& f, int n, cplx branch) {
    if (n < 1) raise(ErrorCode::InvalidInput, "root index must be >= 1");
    if (std::abs(f.constant_term()) > kZeroConstTol)
        raise(ErrorCode::InvalidInput, "compositional root requires f(0) = 0");
    const cplx lambda = f.linear_coeff();
    if (std::abs(lambda) <= kSingularTol)
        raise(ErrorCode::ZeroLinearTerm, "linear term vanishes; root branches are not unique");
    cplx bpow = 1.0;
    for (int i = 0; i < n; ++i) bpow *= branch;
    if (std::abs(bpow - lambda) > 1e-9)
        raise(ErrorCode::BadBranch, "branch^n does not match the linear coefficient");
    if (n == 1) return f;

    const int N = f.order();
    const cplx beta = branch;
    TruncatedSeries g(N);
    g.set_coeff(1, beta);
    cplx beta_pow_n1 = 1.0; // beta^{n-1}
    for (int i = 0; i < n - 1; ++i) beta_pow_n1 *= beta;

    for (int j = 2; j <= N; ++j) {
        TruncatedSeries G = g;
        for (int m = 0; m < n - 1; ++m) G = compose(g, G);
        // Linear response of the j-th coefficient of the n-fold composition
        // to g_j: S = beta^{n-1} * sum_{m<n} beta^{m(j-1)}.
        cplx s = 0.0, term = 1.0;
        cplx beta_j1 = 1.0;
        for (int i = 0; i < j - 1; ++i) beta_j1 *= beta;
        for (int m = 0; m < n; ++m) {
            s += term;
            term *= beta_j1;
        }
        const cplx S = beta_pow_n1 * s;
        if (std::abs(S) <= kSingularTol)
            raise(ErrorCode::ResonantBranch,
                  "branch resonates at order " + std::to_string(j) +
                      "; root coefficients are not determined");
        g.set_coeff(j, (f.coeff(j) - G.coeff(j)) / S);
    }
    return g;
}

TruncatedSeries compositional_root(const TruncatedSeries& f, int n) {
    const cplx lambda = f.linear_coeff();
    if (std::abs(lambda) <= kSingularTol)
        raise(ErrorCode::ZeroLinearTerm, "linear term vanishes; root branches are not unique");
    const cplx branch = std::pow(lambda, 1.0 / static_cast<double>(n));
    return compositional_root(f, n, branch);
}

} // namespace monomul
