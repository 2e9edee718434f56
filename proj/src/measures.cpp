#include "monomul/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "monomul/errors.hpp"

namespace monomul {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMergeTol = 1e-12;
constexpr double kWeightSumTol = 1e-12;
constexpr double kPoleTol = 1e-14;
constexpr double kDomainTol = 1e-12;
constexpr double kPronyRankTol = 1e-8;
constexpr double kPronyDomainTol = 1e-8;

double canonical_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    // fmod can land exactly on 2pi after the correction when theta is a tiny
    // negative number.
    if (t >= kTwoPi) t = 0.0;
    return t;
}

} // namespace

AtomicMeasure::AtomicMeasure(MeasureDomain domain, std::vector<Atom> atoms)
    : domain_(domain) {
    if (atoms.empty()) raise(ErrorCode::InvalidInput, "measure needs at least one atom");
    for (auto& a : atoms) {
        if (!(a.weight > 0.0))
            raise(ErrorCode::InvalidInput, "atom weights must be positive");
        if (domain == MeasureDomain::half_line) {
            if (a.position < -kMergeTol)
                raise(ErrorCode::InvalidInput, "half-line atom positions must be >= 0");
            a.position = std::max(a.position, 0.0);
        } else {
            a.position = canonical_angle(a.position);
        }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.position < y.position; });
    // Merge coinciding atoms (circle: first and last may meet across 0/2pi).
    for (const auto& a : atoms) {
        if (!atoms_.empty() && a.position - atoms_.back().position <= kMergeTol)
            atoms_.back().weight += a.weight;
        else
            atoms_.push_back(a);
    }
    if (domain == MeasureDomain::circle && atoms_.size() > 1 &&
        kTwoPi - atoms_.back().position + atoms_.front().position <= kMergeTol) {
        atoms_.front().weight += atoms_.back().weight;
        atoms_.pop_back();
    }
    double sum = 0.0;
    for (const auto& a : atoms_) sum += a.weight;
    if (std::abs(sum - 1.0) > kWeightSumTol)
        raise(ErrorCode::InvalidInput, "atom weights must sum to 1");
}

AtomicMeasure AtomicMeasure::point_mass(MeasureDomain domain, double position) {
    return AtomicMeasure(domain, {Atom{position, 1.0}});
}

const AtomicMeasure& AtomicMeasure::haar() {
    static const AtomicMeasure h;
    return h;
}

cplx AtomicMeasure::position_value(std::size_t i) const {
    const Atom& a = atoms_.at(i);
    if (domain_ == MeasureDomain::half_line) return a.position;
    return std::polar(1.0, a.position);
}

cplx AtomicMeasure::first_moment() const {
    cplx m = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        m += atoms_[i].weight * position_value(i);
    return m;
}

double AtomicMeasure::min_position() const {
    if (haar_ || domain_ != MeasureDomain::half_line)
        raise(ErrorCode::InvalidInput, "support endpoints are half-line-only");
    return atoms_.front().position;
}

double AtomicMeasure::max_position() const {
    if (haar_ || domain_ != MeasureDomain::half_line)
        raise(ErrorCode::InvalidInput, "support endpoints are half-line-only");
    return atoms_.back().position;
}

MomentSequence moments(const AtomicMeasure& mu, int order) {
    if (order < 1) raise(ErrorCode::InvalidInput, "moment order must be >= 1");
    std::vector<cplx> m(static_cast<std::size_t>(order), cplx(0.0));
    if (mu.is_haar()) return MomentSequence(std::move(m));
    std::vector<cplx> pos(mu.atoms().size());
    std::vector<cplx> pw(mu.atoms().size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        pos[i] = mu.position_value(i);
        pw[i] = mu.atoms()[i].weight;
    }
    for (int n = 1; n <= order; ++n) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            pw[i] *= pos[i];
            acc += pw[i];
        }
        m[static_cast<std::size_t>(n - 1)] = acc;
    }
    return MomentSequence(std::move(m));
}

double distance_to_positive_ray(cplx z) {
    if (z.real() >= 0.0) return std::abs(z.imag());
    return std::abs(z);
}

TransformPoint TransformPoint::omega(cplx z) {
    if (distance_to_positive_ray(z) <= kDomainTol)
        raise(ErrorCode::DomainViolation, "point lies on (or hugs) the positive ray");
    return TransformPoint(MeasureDomain::half_line, z);
}

TransformPoint TransformPoint::disk(cplx z) {
    if (std::abs(z) >= 1.0 - kDomainTol)
        raise(ErrorCode::DomainViolation, "point lies outside the open unit disk");
    return TransformPoint(MeasureDomain::circle, z);
}

TransformPoint TransformPoint::in_domain(MeasureDomain d, cplx z) {
    return d == MeasureDomain::half_line ? omega(z) : disk(z);
}

cplx psi_at(const AtomicMeasure& mu, cplx z) {
    if (mu.is_haar()) return 0.0;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
        const cplx zt = z * mu.position_value(i);
        const cplx denom = 1.0 - zt;
        if (std::abs(denom) < kPoleTol)
            raise(ErrorCode::PoleHit, "evaluation point collides with an atom pole");
        acc += mu.atoms()[i].weight * zt / denom;
    }
    return acc;
}

cplx eval_psi(const AtomicMeasure& mu, const TransformPoint& p) {
    if (!mu.is_haar() && p.domain() != mu.domain())
        raise(ErrorCode::InvalidInput, "transform point domain does not match the measure");
    return psi_at(mu, p.value());
}

cplx eval_eta(const AtomicMeasure& mu, const TransformPoint& p) {
    const cplx psi = eval_psi(mu, p);
    const cplx denom = 1.0 + psi;
    if (std::abs(denom) < kPoleTol)
        raise(ErrorCode::PoleHit, "eta denominator vanishes");
    return psi / denom;
}

cplx eval_cauchy(const AtomicMeasure& mu, cplx w) {
    if (mu.domain() != MeasureDomain::half_line)
        raise(ErrorCode::InvalidInput, "Cauchy transform is half-line-only");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
        const cplx denom = w - mu.position_value(i);
        if (std::abs(denom) < kPoleTol)
            raise(ErrorCode::PoleHit, "evaluation point collides with an atom");
        acc += mu.atoms()[i].weight / denom;
    }
    return acc;
}

std::vector<double> stieltjes_density_from_cauchy(const TransformFn& cauchy,
                                                  std::span<const double> grid,
                                                  double eps) {
    if (!(eps > 0.0)) raise(ErrorCode::InvalidInput, "smoothing eps must be positive");
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) {
        if (t < 0.0) raise(ErrorCode::InvalidInput, "density grid points must be >= 0");
        out.push_back(-cauchy(cplx(t, eps)).imag() / std::numbers::pi);
    }
    return out;
}

std::vector<double> stieltjes_density(const TransformFn& psi, std::span<const double> grid,
                                      double eps) {
    return stieltjes_density_from_cauchy(
        [&psi](cplx w) { return (1.0 + psi(1.0 / w)) / w; }, grid, eps);
}

std::vector<double> poisson_density(const TransformFn& psi, std::span<const double> angles,
                                    double r) {
    if (!(r > 0.0) || r >= 1.0)
        raise(ErrorCode::InvalidInput, "Poisson radius must lie in (0, 1)");
    std::vector<double> out;
    out.reserve(angles.size());
    for (double theta : angles) {
        const cplx z = std::polar(r, -theta);
        out.push_back((1.0 + 2.0 * psi(z)).real() / kTwoPi);
    }
    return out;
}

std::vector<double> poisson_density(const AtomicMeasure& mu, std::span<const double> angles,
                                    double r) {
    if (!mu.is_haar() && mu.domain() != MeasureDomain::circle)
        raise(ErrorCode::InvalidInput, "Poisson density is circle-only");
    return poisson_density([&mu](cplx z) { return psi_at(mu, z); }, angles, r);
}

namespace {

// Moments with m_0 = 1 prepended, as an Eigen vector.
Eigen::VectorXcd full_moments(const MomentSequence& m, int upto) {
    Eigen::VectorXcd full(upto + 1);
    full(0) = 1.0;
    for (int n = 1; n <= upto; ++n) full(n) = m.moment(n);
    return full;
}

} // namespace

AtomicMeasure prony_recover(const MomentSequence& m, int k, MeasureDomain domain) {
    if (k < 1) raise(ErrorCode::InvalidInput, "atom budget must be >= 1");
    if (2 * k > m.order())
        raise(ErrorCode::InvalidInput, "prony needs moments through order 2k");
    const Eigen::VectorXcd full = full_moments(m, 2 * k);

    Eigen::MatrixXcd H(k + 1, k + 1);
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) H(i, j) = full(i + j);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > kPronyRankTol * sv(0)) ++r;
    if (r > k)
        raise(ErrorCode::RankMismatch, "moments need more than the allowed atom count");
    if (r == 0) raise(ErrorCode::RankMismatch, "degenerate moment matrix");

    // Annihilating polynomial x^r + q_{r-1} x^{r-1} + .. + q_0 from the
    // moment recurrence, then atom positions as its roots.
    Eigen::MatrixXcd T(r, r);
    Eigen::VectorXcd rhs(r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) T(i, j) = full(i + j);
        rhs(i) = -full(i + r);
    }
    const Eigen::VectorXcd q = T.completeOrthogonalDecomposition().solve(rhs);
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(r, r);
    for (int i = 1; i < r; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < r; ++i) companion(i, r - 1) = -q(i);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion, false);
    const Eigen::VectorXcd roots = eig.eigenvalues();

    // Weights from the Vandermonde least-squares over all available rows.
    // (Powers built multiplicatively: std::pow(0+0i, 0) is NaN-prone.)
    Eigen::MatrixXcd V(2 * k + 1, r);
    for (int j = 0; j < r; ++j) {
        cplx p = 1.0;
        for (int n = 0; n <= 2 * k; ++n) {
            V(n, j) = p;
            p *= roots(j);
        }
    }
    const Eigen::VectorXcd w = V.completeOrthogonalDecomposition().solve(full);

    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(r));
    double wsum = 0.0;
    for (int j = 0; j < r; ++j) {
        const cplx x = roots(j);
        const cplx wt = w(j);
        if (std::abs(wt.imag()) > kPronyDomainTol || wt.real() <= kPronyDomainTol)
            raise(ErrorCode::DomainViolation, "recovered weight is not a positive real");
        double position;
        if (domain == MeasureDomain::half_line) {
            if (std::abs(x.imag()) > kPronyDomainTol || x.real() < -kPronyDomainTol)
                raise(ErrorCode::DomainViolation, "recovered atom leaves the half-line");
            position = std::max(x.real(), 0.0);
        } else {
            if (std::abs(std::abs(x) - 1.0) > kPronyDomainTol)
                raise(ErrorCode::DomainViolation, "recovered atom leaves the unit circle");
            position = canonical_angle(std::arg(x));
        }
        atoms.push_back(Atom{position, wt.real()});
        wsum += wt.real();
    }
    if (std::abs(wsum - 1.0) > kPronyDomainTol)
        raise(ErrorCode::DomainViolation, "recovered weights do not sum to 1");
    for (auto& a : atoms) a.weight /= wsum;

    AtomicMeasure mu(domain, std::move(atoms));
    // The recovered atoms must actually reproduce the data they came from
    // (tolerance scales with the moment magnitude for wide supports).
    const MomentSequence check = moments(mu, 2 * k);
    for (int n = 1; n <= 2 * k; ++n) {
        const double scale = std::max(1.0, std::abs(m.moment(n)));
        if (std::abs(check.moment(n) - m.moment(n)) > kPronyDomainTol * scale)
            raise(ErrorCode::RankMismatch, "recovered atoms fail to reproduce the moments");
    }
    return mu;
}

std::optional<AtomicMeasure> try_prony_recover(const MomentSequence& m, MeasureDomain domain,
                                               int max_atoms) {
    const int cap = std::min(max_atoms, m.order() / 2);
    for (int k = 1; k <= cap; ++k) {
        try {
            return prony_recover(m, k, domain);
        } catch (const Error&) {
            continue;
        }
    }
    return std::nullopt;
}

} // namespace monomul
