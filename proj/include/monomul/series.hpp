#pragma once

#include <complex>
#include <span>
#include <vector>

// Truncated power series over C, the workhorse of the eta-transform calculus.
// A series of order N keeps the constant term c0 and coefficients c1..cN;
// every operation truncates at order N and never reports coefficients beyond.

namespace monomul {

using cplx = std::complex<double>;

class TruncatedSeries {
  public:
    // Zero series of the given order.
    explicit TruncatedSeries(int order);

    static TruncatedSeries identity(int order);                  // z
    static TruncatedSeries constant(cplx c0, int order);
    static TruncatedSeries from_coeffs(cplx c0, std::span<const cplx> tail);

    int order() const { return static_cast<int>(data_.size()) - 1; }

    cplx constant_term() const { return data_[0]; }
    cplx linear_coeff() const { return data_[1]; }

    // Coefficient of z^n, 0 <= n <= order.
    cplx coeff(int n) const;
    void set_coeff(int n, cplx value);

    // c1..cN view.
    std::span<const cplx> tail() const { return {data_.data() + 1, data_.size() - 1}; }

    // Contiguous [c0, c1, .., cN] (used by the kernels layer).
    std::span<const cplx> raw() const { return data_; }
    std::span<cplx> raw() { return data_; }

    TruncatedSeries& operator+=(const TruncatedSeries& rhs);
    TruncatedSeries& operator-=(const TruncatedSeries& rhs);
    TruncatedSeries& operator*=(cplx scalar);

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) {
        return a += b;
    }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) {
        return a -= b;
    }
    friend TruncatedSeries operator*(TruncatedSeries a, cplx s) { return a *= s; }
    friend TruncatedSeries operator*(cplx s, TruncatedSeries a) { return a *= s; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

    // 1/f; requires a nonzero constant term.
    TruncatedSeries reciprocal() const;

    // f(c*z).
    TruncatedSeries rescale_argument(cplx c) const;

    // exp(f) for f with zero constant term.
    TruncatedSeries exp_zero_constant() const;

    // Largest |c_n| over 0..order.
    double max_abs() const;

  private:
    std::vector<cplx> data_; // index = power of z, size order+1
};

// Moment sequence m_1..m_N of a (possibly formal) distribution; m_0 = 1 is
// implicit and never stored.
class MomentSequence {
  public:
    MomentSequence() = default;
    explicit MomentSequence(std::vector<cplx> moments) : m_(std::move(moments)) {}

    int order() const { return static_cast<int>(m_.size()); }
    // m_n for 1 <= n <= order.
    cplx moment(int n) const;
    std::span<const cplx> all() const { return m_; }
    std::vector<cplx>& storage() { return m_; }

    // Moments of the dilated distribution t -> c*t: m_n * c^n.
    MomentSequence dilate(cplx c) const;

    MomentSequence truncated(int order) const;

  private:
    std::vector<cplx> m_;
};

// psi(z) = sum_{n>=1} m_n z^n  — the moment generating series.
TruncatedSeries psi_from_moments(const MomentSequence& m);
MomentSequence moments_from_psi(const TruncatedSeries& psi);

// eta = psi / (1 + psi) and its inverse psi = eta / (1 - eta).
TruncatedSeries eta_from_psi(const TruncatedSeries& psi);
TruncatedSeries psi_from_eta(const TruncatedSeries& eta);

MomentSequence moments_from_eta(const TruncatedSeries& eta);
TruncatedSeries eta_from_moments(const MomentSequence& m);

// f(g(z)); g must have zero constant term (g'(0) = 0 is fine).
TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g);

// g with f(g(z)) = g(f(z)) = z. Requires f(0) = 0; throws SingularLinearTerm
// when |f'(0)| <= 1e-12.
TruncatedSeries compositional_inverse(const TruncatedSeries& f);

// g with g composed with itself n times equal to f, and g'(0) = branch where
// branch^n = f'(0). The principal-branch overload picks the principal n-th
// root of f'(0). Throws ZeroLinearTerm when |f'(0)| <= 1e-12, BadBranch when
// |branch^n - f'(0)| > 1e-9, ResonantBranch when an order's linear response
// vanishes (rotated-branch resonance).
TruncatedSeries compositional_root(const TruncatedSeries& f, int n, cplx branch);
TruncatedSeries compositional_root(const TruncatedSeries& f, int n);

} // namespace monomul
