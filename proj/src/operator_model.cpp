#include "monomul/operator_model.hpp"

#include <algorithm>
#include <cmath>

#include "monomul/errors.hpp"
#include "monomul/kernels.hpp"
#include "monomul/rng.hpp"

namespace monomul {

namespace {

constexpr double kUnitCoeffTol = 1e-12;

void require_dim(int d) {
    if (d < 2) raise(ErrorCode::InvalidInput, "operator dimension must be >= 2");
}

} // namespace

DenseMat DenseMat::zero(int d) {
    DenseMat m;
    m.dim = d;
    m.a.assign(static_cast<std::size_t>(d) * d, cplx(0.0));
    return m;
}

DenseMat DenseMat::identity(int d) {
    DenseMat m = zero(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
}

DenseMat build_shift(int d) {
    require_dim(d);
    DenseMat s = DenseMat::zero(d);
    for (int j = 0; j + 1 < d; ++j) s.at(j + 1, j) = 1.0;
    return s;
}

DenseMat shift_poly_matrix(const ShiftPolyVariable& v, int d) {
    require_dim(d);
    if (v.u.empty() || std::abs(v.u[0]) <= kUnitCoeffTol)
        raise(ErrorCode::InvalidInput, "shift polynomial needs u(0) != 0");
    // u(s*) has entry u_k on the k-th superdiagonal; premultiplying by (1+s)
    // adds each row shifted down by one.
    DenseMat m = DenseMat::zero(d);
    for (int i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < v.u.size(); ++k) {
            const int j = i + static_cast<int>(k);
            if (j >= d) break;
            m.at(i, j) += v.u[k];
            if (i + 1 < d) m.at(i + 1, j) += v.u[k];
        }
    }
    return m;
}

OperatorScene realize_pair(const ShiftPolyVariable& v1, const ShiftPolyVariable& v2, int d) {
    require_dim(d);
    OperatorScene scene;
    scene.dim = d;
    scene.c1 = v1.c;
    scene.c2 = v2.c;

    DenseMat proj = DenseMat::zero(d); // p = e_0 e_0^T
    proj.at(0, 0) = 1.0;
    DenseMat coproj = DenseMat::identity(d); // 1 - p
    coproj.at(0, 0) = 0.0;
    DenseMat scaled_id = DenseMat::identity(d);
    for (auto& e : scaled_id.a) e *= v1.c;

    KronOp x1;
    x1.terms.push_back(KronTerm{scaled_id, coproj});
    x1.terms.push_back(KronTerm{shift_poly_matrix(v1, d), proj});
    KronOp x2;
    x2.terms.push_back(KronTerm{DenseMat::identity(d), shift_poly_matrix(v2, d)});

    scene.ops.emplace("x1", std::move(x1));
    scene.ops.emplace("x2", std::move(x2));
    return scene;
}

void apply_kron(const KronOp& op, const cplx* in, cplx* out, int d, cplx* scratch) {
    const std::size_t n2 = static_cast<std::size_t>(d) * d;
    std::fill(out, out + n2, cplx(0.0));
    for (const KronTerm& term : op.terms) {
        // scratch[k*d + j] = sum_l right[j][l] * in[k*d + l]
        std::fill(scratch, scratch + n2, cplx(0.0));
        for (int j = 0; j < d; ++j) {
            const cplx* brow = &term.right.a[static_cast<std::size_t>(j) * d];
            for (int k = 0; k < d; ++k)
                scratch[static_cast<std::size_t>(k) * d + j] =
                    kernels::dot(brow, in + static_cast<std::size_t>(k) * d,
                                 static_cast<std::size_t>(d));
        }
        // out[i*d + :] += left[i][k] * scratch[k*d + :]
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i) {
                const cplx a = term.left.at(i, k);
                if (a == 0.0) continue;
                kernels::axpy(out + static_cast<std::size_t>(i) * d, a,
                              scratch + static_cast<std::size_t>(k) * d,
                              static_cast<std::size_t>(d));
            }
        }
    }
}

namespace {

struct SceneWorkspace {
    explicit SceneWorkspace(int d)
        : vec(static_cast<std::size_t>(d) * d, cplx(0.0)),
          tmp(vec.size(), cplx(0.0)),
          scratch(vec.size(), cplx(0.0)) {}
    std::vector<cplx> vec, tmp, scratch;
};

const KronOp& named_op(const OperatorScene& scene, const std::string& name) {
    auto it = scene.ops.find(name);
    if (it == scene.ops.end())
        raise(ErrorCode::InvalidInput, "unknown operator name: " + name);
    return it->second;
}

void apply_named(const OperatorScene& scene, const std::string& name, SceneWorkspace& ws) {
    apply_kron(named_op(scene, name), ws.vec.data(), ws.tmp.data(), scene.dim,
               ws.scratch.data());
    ws.vec.swap(ws.tmp);
}

} // namespace

std::vector<cplx> oracle_moments(const OperatorScene& scene,
                                 const std::vector<std::string>& word, int order) {
    if (order < 1) raise(ErrorCode::InvalidInput, "moment order must be >= 1");
    if (word.empty()) return std::vector<cplx>(static_cast<std::size_t>(order), cplx(1.0));
    const long needed = static_cast<long>(order) * static_cast<long>(word.size()) + 2;
    if (scene.dim < needed)
        raise(ErrorCode::TruncationExceeded,
              "dimension " + std::to_string(scene.dim) + " cannot hold a word of length " +
                  std::to_string(needed - 2) + " exactly");

    SceneWorkspace ws(scene.dim);
    ws.vec[0] = 1.0; // e_0 (x) e_0
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(order));
    for (int n = 1; n <= order; ++n) {
        // Rightmost factor acts first.
        for (auto it = word.rbegin(); it != word.rend(); ++it) apply_named(scene, *it, ws);
        out.push_back(ws.vec[0]);
    }
    return out;
}

std::vector<cplx> shift_poly_moments(const ShiftPolyVariable& v, int d, int order) {
    if (order < 1) raise(ErrorCode::InvalidInput, "moment order must be >= 1");
    if (d < order + 2)
        raise(ErrorCode::TruncationExceeded, "dimension too small for requested order");
    const DenseMat m = shift_poly_matrix(v, d);
    std::vector<cplx> vec(static_cast<std::size_t>(d), cplx(0.0)), tmp(vec);
    vec[0] = 1.0;
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(order));
    for (int n = 1; n <= order; ++n) {
        std::fill(tmp.begin(), tmp.end(), cplx(0.0));
        for (int i = 0; i < d; ++i)
            tmp[static_cast<std::size_t>(i)] =
                kernels::dot(&m.a[static_cast<std::size_t>(i) * d], vec.data(),
                             static_cast<std::size_t>(d));
        vec.swap(tmp);
        out.push_back(vec[0]);
    }
    return out;
}

namespace {

// Applies p(X) with X = x_name - c to ws.vec, zero constant term:
// p(X) v = sum_k p_k X^k v.
void apply_centered_poly(const OperatorScene& scene, const std::string& name, cplx c,
                         const std::vector<cplx>& pcoeff, SceneWorkspace& ws,
                         std::vector<cplx>& accum) {
    std::fill(accum.begin(), accum.end(), cplx(0.0));
    for (std::size_t k = 1; k < pcoeff.size(); ++k) {
        // ws.vec currently holds X^{k-1} v; advance one power.
        apply_kron(named_op(scene, name), ws.vec.data(), ws.tmp.data(), scene.dim,
                   ws.scratch.data());
        kernels::axpy(ws.tmp.data(), -c, ws.vec.data(), ws.tmp.size());
        ws.vec.swap(ws.tmp);
        kernels::axpy(accum.data(), pcoeff[k], ws.vec.data(), accum.size());
    }
}

std::vector<cplx> centered_poly_vector(const OperatorScene& scene, const std::string& name,
                                       cplx c, const std::vector<cplx>& pcoeff,
                                       const std::vector<cplx>& start,
                                       SceneWorkspace& ws) {
    std::vector<cplx> accum(start.size(), cplx(0.0));
    ws.vec = start;
    apply_centered_poly(scene, name, c, pcoeff, ws, accum);
    return accum;
}

cplx state_expectation(const std::vector<cplx>& v) { return v[0]; }

std::vector<cplx> random_poly(DrawGen& gen, int maxdeg) {
    // Zero constant term; degree between 1 and maxdeg.
    const int deg = static_cast<int>(gen.uniform_int(1, maxdeg));
    std::vector<cplx> p(static_cast<std::size_t>(deg) + 1, cplx(0.0));
    for (int k = 1; k <= deg; ++k) p[static_cast<std::size_t>(k)] = gen.complex_in_disk(1.0);
    return p;
}

} // namespace

double AxiomReport::max_residual() const {
    return std::max({operator_identity, moment_factorization, commutation_remnant});
}

AxiomReport check_monotone_axioms(const OperatorScene& scene, int trials,
                                  std::uint64_t seed) {
    const int d = scene.dim;
    constexpr int kMaxDeg = 3;
    // Three polynomial applications of degree <= 3 move the level by at most
    // 9; basis samples must leave that much headroom.
    const int max_start = d - 3 * kMaxDeg - 2;
    if (max_start < 0)
        raise(ErrorCode::TruncationExceeded, "dimension too small for axiom checks");

    DrawGen gen(seed);
    SceneWorkspace ws(d);
    const std::size_t n2 = static_cast<std::size_t>(d) * d;
    AxiomReport report;

    std::vector<int> levels = {0};
    if (max_start >= 1) levels.push_back(1);
    if (max_start >= 3) levels.push_back(3);
    if (max_start >= 7) levels.push_back(7);

    for (int trial = 0; trial < trials; ++trial) {
        const auto a = random_poly(gen, kMaxDeg);  // algebra of x_1 - c_1
        const auto b = random_poly(gen, kMaxDeg);  // algebra of x_1 - c_1
        const auto r = random_poly(gen, kMaxDeg);  // algebra of x_2 - c_2
        const auto r2 = random_poly(gen, kMaxDeg); // algebra of x_2 - c_2

        // phi values in the vector state.
        std::vector<cplx> e00(n2, cplx(0.0));
        e00[0] = 1.0;
        const auto av = centered_poly_vector(scene, "x1", scene.c1, a, e00, ws);
        const auto rv = centered_poly_vector(scene, "x2", scene.c2, r, e00, ws);
        const auto r2v = centered_poly_vector(scene, "x2", scene.c2, r2, e00, ws);
        const cplx phi_a = state_expectation(av);
        const cplx phi_r = state_expectation(rv);
        const cplx phi_r2 = state_expectation(r2v);

        // Operator identity a(X1) r(X2) b(X1) = phi(r) a(X1) b(X1) on basis
        // vectors e_i (x) e_j with headroom.
        for (int li : levels) {
            for (int lj : levels) {
                if (li > max_start || lj > max_start) continue;
                std::vector<cplx> start(n2, cplx(0.0));
                start[static_cast<std::size_t>(li) * d + lj] = 1.0;
                auto lhs = centered_poly_vector(scene, "x1", scene.c1, b, start, ws);
                lhs = centered_poly_vector(scene, "x2", scene.c2, r, lhs, ws);
                lhs = centered_poly_vector(scene, "x1", scene.c1, a, lhs, ws);
                auto rhs = centered_poly_vector(scene, "x1", scene.c1, b, start, ws);
                rhs = centered_poly_vector(scene, "x1", scene.c1, a, rhs, ws);
                kernels::scale(rhs.data(), phi_r, rhs.size());
                double resid = 0.0;
                for (std::size_t i = 0; i < n2; ++i)
                    resid = std::max(resid, std::abs(lhs[i] - rhs[i]));
                report.operator_identity = std::max(report.operator_identity, resid);
            }
        }

        // Moment factorizations.
        {
            auto v = centered_poly_vector(scene, "x2", scene.c2, r2, e00, ws);
            v = centered_poly_vector(scene, "x1", scene.c1, a, v, ws);
            const cplx phi_ar2 = state_expectation(v);
            v = centered_poly_vector(scene, "x2", scene.c2, r, v, ws);
            const cplx phi_rar2 = state_expectation(v);
            report.moment_factorization =
                std::max(report.moment_factorization,
                         std::abs(phi_rar2 - phi_r * phi_a * phi_r2));
            report.moment_factorization =
                std::max(report.moment_factorization,
                         std::abs(phi_ar2 - phi_a * phi_r2));
            auto w = centered_poly_vector(scene, "x1", scene.c1, a, e00, ws);
            w = centered_poly_vector(scene, "x2", scene.c2, r, w, ws);
            report.moment_factorization =
                std::max(report.moment_factorization,
                         std::abs(state_expectation(w) - phi_r * phi_a));
        }

        // Commutation remnant:
        // phi(r a r2) - phi(a r2 r) = phi(a) (phi(r) phi(r2) - phi(r r2)).
        {
            auto v = centered_poly_vector(scene, "x2", scene.c2, r2, e00, ws);
            v = centered_poly_vector(scene, "x1", scene.c1, a, v, ws);
            v = centered_poly_vector(scene, "x2", scene.c2, r, v, ws);
            const cplx lhs1 = state_expectation(v);
            auto w = centered_poly_vector(scene, "x2", scene.c2, r, e00, ws);
            w = centered_poly_vector(scene, "x2", scene.c2, r2, w, ws);
            w = centered_poly_vector(scene, "x1", scene.c1, a, w, ws);
            const cplx lhs2 = state_expectation(w);
            auto u = centered_poly_vector(scene, "x2", scene.c2, r2, e00, ws);
            u = centered_poly_vector(scene, "x2", scene.c2, r, u, ws);
            const cplx phi_rr2 = state_expectation(u);
            const cplx rhs = phi_a * (phi_r * phi_r2 - phi_rr2);
            report.commutation_remnant =
                std::max(report.commutation_remnant, std::abs((lhs1 - lhs2) - rhs));
        }
    }
    return report;
}

} // namespace monomul
