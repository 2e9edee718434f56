#pragma once

#include <optional>
#include <span>
#include <vector>

#include "monomul/convolution.hpp"
#include "monomul/measures.hpp"
#include "monomul/series.hpp"

// Flow semigroups for the two multiplicative monotone convolutions. A
// generator pairs a drift with a nonnegative atomic measure; its vector
// field B drives either the forward-increment flow (state rescaled by
// exp(a*tau), so coefficients stay bounded) or the plain flow (eta itself
// evolves). Trajectories can be integrated pointwise or at the level of
// truncated eta series, and series checkpoints can be condensed back into
// atomic measures when a finite-atom representation exists.

namespace monomul {

class Generator {
public:
    enum class Kind { half_line_atomic, circle_herglotz, circle_power };

    // B(z) = a + z * sum_j w_j / (1 - z t_j), positions t_j >= 0.
    static Generator half_line(double a, std::vector<Atom> nu);
    // B(z) = i*beta - sum_j w_j (zeta_j + z) / (zeta_j - z), zeta_j = e^{i theta_j}.
    static Generator circle(double beta, std::vector<Atom> rho);
    // B(z) = z^n - 1.
    static Generator circle_power(int n);

    Kind kind() const { return kind_; }
    MeasureDomain domain() const;

    cplx drift() const;          // a = B(0)
    cplx B_full(cplx z) const;   // includes the drift
    TruncatedSeries B_full_series(int order) const;

    double halfline_drift() const { return a_; }
    const std::vector<Atom>& nu() const { return nu_; }
    double circle_beta() const { return beta_; }
    const std::vector<Atom>& rho() const { return rho_; }
    int power() const { return power_; }

private:
    Generator() = default;
    Kind kind_ = Kind::half_line_atomic;
    double a_ = 0.0;            // half-line drift
    std::vector<Atom> nu_;      // half-line jump measure
    double beta_ = 0.0;         // circle rotation part
    std::vector<Atom> rho_;     // circle boundary measure
    int power_ = 1;             // exponent for the builtin circle family
};

struct GeneratorValidation {
    bool ok = true;
    double worst_sign_violation = 0.0;     // Im B < 0 upstairs / Re B > 0 in the disk
    double worst_symmetry_violation = 0.0; // B(conj z) vs conj B(z), half-line only
};

// Samples B on a grid (about 200 points) of the relevant domain and checks
// the defining sign condition plus conjugate symmetry. Reports rather than
// throws so callers can inspect near-boundary generators.
GeneratorValidation validate_generator(const Generator& g);

enum class HalflineFlowClass {
    denjoy_wolff_zero,     // drift <= 0: trajectories attracted toward 0
    denjoy_wolff_infinity, // B > 0 on the negative axis: attracted toward infinity
    interior_fixed_point,  // B has a sign change at some x* < 0
};

struct HalflineClassification {
    HalflineFlowClass flow_class;
    std::optional<double> fixed_point; // x* < 0 with B(x*) = 0, third class only
};

HalflineClassification classify_halfline_generator(const Generator& g);

enum class Scheme { rk, euler_exp, crosscheck };

struct FlowOptions {
    Scheme scheme = Scheme::rk;
    double abs_tol = 1e-10;       // adaptive step error tolerance
    double max_step = 1e-2;
    double euler_substep = 1e-3;  // exponential Euler step size
    double cross_tol = 1e-6;      // rk vs euler disagreement threshold
    std::uint64_t max_iter = 10'000'000;
};

struct FlowSample {
    double tau = 0.0;
    cplx value{}; // eta_{mu_tau}(z) for the requested convolution
};

// Pointwise trajectory tau -> eta_{mu_tau}(z0) at the given checkpoints
// (nonnegative, ascending). For the forward-increment convolution each
// checkpoint integrates the increment field from exp(a*tau) * z0; for the
// plain convolution eta itself flows from z0.
std::vector<FlowSample> integrate_flow(const Generator& g, ConvOp op, cplx z0,
                                       std::span<const double> taus,
                                       const FlowOptions& opts = {});

// Single checkpoint convenience wrapper.
cplx eta_value(const Generator& g, ConvOp op, cplx z, double tau,
               const FlowOptions& opts = {});

// Time-tau map of the bare increment field u' = u * (B(u) - a), without the
// exp(a*tau) argument rescaling. This is the composition flow underlying the
// forward-increment convolution: eta_{mu_tau}(z) = u_tau(exp(a*tau) * z).
cplx increment_flow_value(const Generator& g, cplx z, double tau,
                          const FlowOptions& opts = {});

struct SemigroupPoint {
    double tau = 0.0;
    TruncatedSeries eta;
    MomentSequence moments;
    std::optional<AtomicMeasure> measure; // present when a finite-atom fit passes
};

// Series-level flow: evolves the eta coefficients through the checkpoints
// and attempts an atomic reconstruction at each one.
std::vector<SemigroupPoint> semigroup_measures(const Generator& g, ConvOp op,
                                               std::span<const double> taus, int order,
                                               const FlowOptions& opts = {});

// Splits mu into 2^depth equal convolution factors: level k holds the
// 2^k-th root of mu under the requested convolution, and every level is
// re-composed and checked against its parent before being returned.
// Index 0 is mu itself.
std::vector<MomentSequence> divisibility_chain(const MomentSequence& mu, ConvOp op,
                                               int depth);

} // namespace monomul
