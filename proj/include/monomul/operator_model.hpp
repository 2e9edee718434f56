#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "monomul/series.hpp"

// Finite-dimensional operator realization of monotonically independent pairs.
//
// On H = C^d with orthonormal basis e_0..e_{d-1}, the truncated shift s maps
// e_j to e_{j+1}. A "shift-polynomial variable" is M(u) = (1 + s) u(s*) for a
// polynomial u with u(0) != 0; its moments in the state <. e_0, e_0> realize
// the distribution whose psi-series inverts z / ((1+z) u(z)).
//
// A pair is realized on H (x) H with state vector e_0 (x) e_0:
//   x_1 = c_1 (x) (1 - p) + M(u_1) (x) p,      x_2 = 1 (x) M(u_2),
// where p is the rank-one projection onto e_0. Then x_1 - c_1 and x_2 - c_2
// are monotonically independent, with marginal distributions given by the
// shift-polynomial variables.
//
// Operators are kept as sums of Kronecker factors (never materialized at
// d^2 x d^2); moments come from repeated application to the state vector.
// Truncation exactness: each operator application raises the occupied basis
// level by at most one (polynomials in s* only lower it), so a word of total
// length L is exact as long as d >= L + 2.

namespace monomul {

struct ShiftPolyVariable {
    std::vector<cplx> u; // u[k] = coefficient of z^k; |u[0]| > 1e-12
    cplx c = 0.0;        // centering constant of the pair embedding
};

// Dense d x d complex matrix, row-major.
struct DenseMat {
    int dim = 0;
    std::vector<cplx> a;

    static DenseMat zero(int d);
    static DenseMat identity(int d);
    cplx& at(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
    cplx at(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }
};

// The truncated shift: ones on the first subdiagonal.
DenseMat build_shift(int d);

// (1 + s) u(s*) as a dense (banded-content) matrix.
DenseMat shift_poly_matrix(const ShiftPolyVariable& v, int d);

// A (x) B acting on vectors indexed v[i*d + j].
struct KronTerm {
    DenseMat left, right;
};

struct KronOp {
    std::vector<KronTerm> terms;
};

struct OperatorScene {
    int dim = 0; // d; vectors live in C^{d^2}
    cplx c1 = 0.0, c2 = 0.0;
    std::map<std::string, KronOp> ops; // "x1", "x2"
};

OperatorScene realize_pair(const ShiftPolyVariable& v1, const ShiftPolyVariable& v2, int d);

// out = op * in (both length d^2). Scratch must hold d^2 entries.
void apply_kron(const KronOp& op, const cplx* in, cplx* out, int d, cplx* scratch);

// Moments phi((W)^n) for n = 1..order, W the product of the named operators
// in word order (left factor applied last). The empty word gives all ones.
// Throws TruncationExceeded unless d >= order * word_length + 2.
std::vector<cplx> oracle_moments(const OperatorScene& scene,
                                 const std::vector<std::string>& word, int order);

// Moments of a single shift-polynomial variable on H (cheap marginal oracle).
std::vector<cplx> shift_poly_moments(const ShiftPolyVariable& v, int d, int order);

// Randomized verification of the monotone-independence conditions in the
// realization: operator identity  a x' b = phi(x') a b  for a, b in the
// algebra of x_1 - c_1 and x' in the algebra of x_2 - c_2; the moment
// factorizations phi(x' a y') = phi(x') phi(a) phi(y') (and the two-factor
// versions); the commutation remnant
// phi(x' a y') - phi(a y' x') = phi(a) (phi(x')phi(y') - phi(x' y')).
struct AxiomReport {
    double operator_identity = 0.0;   // worst residual, condition on operators
    double moment_factorization = 0.0;
    double commutation_remnant = 0.0;
    double max_residual() const;
};

AxiomReport check_monotone_axioms(const OperatorScene& scene, int trials,
                                  std::uint64_t seed);

} // namespace monomul
