#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "monomul/series.hpp"

// Finitely-supported probability measures on the positive half-line or the
// unit circle, their psi/eta/Cauchy transforms, and the inverse problems
// (atom recovery from moments, smoothed densities from boundary values).

namespace monomul {

enum class MeasureDomain { half_line, circle };

struct Atom {
    double position; // point t >= 0 (half_line) or angle in [0, 2pi) (circle)
    double weight;   // > 0
};

class AtomicMeasure {
  public:
    // Validates: weights positive and summing to 1 within 1e-12, positions in
    // the domain. Atoms closer than 1e-12 are merged; circle angles are
    // canonicalized to [0, 2pi). Atoms are kept sorted by position.
    AtomicMeasure(MeasureDomain domain, std::vector<Atom> atoms);

    static AtomicMeasure point_mass(MeasureDomain domain, double position);

    // The uniform (Haar) measure on the circle: not atomic; psi and eta
    // vanish identically and every moment is zero.
    static const AtomicMeasure& haar();
    bool is_haar() const { return haar_; }

    MeasureDomain domain() const { return domain_; }
    std::span<const Atom> atoms() const { return atoms_; }

    // Atom position as a complex number: t itself, or e^{i angle}.
    cplx position_value(std::size_t i) const;

    cplx first_moment() const;

    // Support endpoints (half-line only).
    double min_position() const;
    double max_position() const;

  private:
    AtomicMeasure() : domain_(MeasureDomain::circle), haar_(true) {}

    MeasureDomain domain_;
    std::vector<Atom> atoms_;
    bool haar_ = false;
};

MomentSequence moments(const AtomicMeasure& mu, int order);

// A point of the transform domain: Omega = C minus [0, infinity) for
// half-line measures, the open unit disk for circle measures. Construction
// validates membership (off the ray by > 1e-12, or |z| < 1 - 1e-12).
class TransformPoint {
  public:
    static TransformPoint omega(cplx z);
    static TransformPoint disk(cplx z);
    static TransformPoint in_domain(MeasureDomain d, cplx z);

    cplx value() const { return z_; }
    MeasureDomain domain() const { return domain_; }

  private:
    TransformPoint(MeasureDomain d, cplx z) : domain_(d), z_(z) {}
    MeasureDomain domain_;
    cplx z_;
};

// Distance from z to the closed ray [0, infinity).
double distance_to_positive_ray(cplx z);

// psi_mu(z) = integral of z t / (1 - z t); throws PoleHit when an atom's
// denominator falls below 1e-14. No domain validation (the transform extends
// holomorphically near 0; tests exploit that for Taylor checks).
cplx psi_at(const AtomicMeasure& mu, cplx z);

cplx eval_psi(const AtomicMeasure& mu, const TransformPoint& p);
cplx eval_eta(const AtomicMeasure& mu, const TransformPoint& p);

// Cauchy transform G(w) = integral of 1/(w - t) (half-line measures).
// Satisfies psi(1/w) = w G(w) - 1.
cplx eval_cauchy(const AtomicMeasure& mu, cplx w);

using TransformFn = std::function<cplx(cplx)>;

// Smoothed density -Im G(t + i eps)/pi on a grid of t >= 0, from a supplied
// Cauchy transform, or from a psi transform via G(w) = (1 + psi(1/w))/w.
std::vector<double> stieltjes_density_from_cauchy(const TransformFn& cauchy,
                                                  std::span<const double> grid,
                                                  double eps = 1e-3);
std::vector<double> stieltjes_density(const TransformFn& psi,
                                      std::span<const double> grid, double eps = 1e-3);

// Circle density d(theta) = (1/2pi) Re(1 + 2 psi(r e^{-i theta})) on an angle
// grid, 0 < r < 1.
std::vector<double> poisson_density(const TransformFn& psi, std::span<const double> angles,
                                    double r = 0.99);
std::vector<double> poisson_density(const AtomicMeasure& mu, std::span<const double> angles,
                                    double r = 0.99);

// Recover an atomic measure with at most k atoms from moments m_1..m_{2k}
// (m_0 = 1 implicit; requires 2k <= m.order()). Rank-detects the actual atom
// count r <= k from the (k+1)x(k+1) Hankel matrix (relative threshold 1e-8);
// throws RankMismatch when the moments need more than k atoms or cannot be
// reproduced, DomainViolation when recovered atoms leave the domain by more
// than 1e-8.
AtomicMeasure prony_recover(const MomentSequence& m, int k, MeasureDomain domain);

// Best-effort identification: smallest k <= limit that recovers the moments.
std::optional<AtomicMeasure> try_prony_recover(const MomentSequence& m,
                                               MeasureDomain domain, int max_atoms = 8);

} // namespace monomul
