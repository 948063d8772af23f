#ifndef TOEPSPEC_RICCATI_HPP
#define TOEPSPEC_RICCATI_HPP

#include <memory>
#include <random>
#include <string>

#include "toepspec/pencil.hpp"

namespace toepspec {

/// Membership query: is lambda in the resolvent set of the operator with
/// this realization?
struct RiccatiProblem {
    Realization real;
    cplx lambda;
};

enum class Verdict { Resolvent, NotResolvent, Unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Resolvent: return "Resolvent";
        case Verdict::NotResolvent: return "NotResolvent";
        default: return "Unknown";
    }
}

/// Outcome of a membership query. Resolvent comes with a witness: the
/// stabilizing solution Q of
///
///   Q = alpha Q A + (beta - alpha Q B) D^{-1} (C - gamma Q A),
///   D = R0 - gamma Q B - lambda I,
///
/// together with the stable closed-loop matrices. NotResolvent always
/// carries a certificate tag. Unknown means no stabilizing solution was
/// found, which never certifies non-invertibility.
struct RiccatiOutcome {
    Verdict verdict = Verdict::Unknown;
    Mat Q;
    Mat A_circ, alpha_circ;
    double residual = std::numeric_limits<double>::quiet_NaN();
    double rho_A_circ = std::numeric_limits<double>::quiet_NaN();
    double rho_alpha_circ = std::numeric_limits<double>::quiet_NaN();
    std::string certificate;
};

/// Residual of the Riccati equation at Q, and the matrix D it uses.
/// Throws DSingular when D is numerically singular.
inline std::pair<Mat, Mat> riccati_residual(const RiccatiProblem& p, const Mat& q,
                                            double cond_limit = 1e12) {
    const Realization& r = p.real;
    if (q.rows() != r.n_minus() || q.cols() != r.n_plus())
        throw ParseError("riccati_residual: Q must be n_minus x n_plus");
    const Mat d = r.R0 - r.gamma * q * r.B -
                  p.lambda * Mat::Identity(r.m(), r.m());
    if (condition_number(d) > cond_limit)
        throw DSingularError("riccati_residual: R0 - gamma Q B - lambda I singular");
    const Mat rhs = r.alpha * q * r.A +
                    (r.beta - r.alpha * q * r.B) *
                        d.partialPivLu().solve(r.C - r.gamma * q * r.A);
    return {q - rhs, d};
}

struct RiccatiOptions {
    double ric_tol = 1e-10;
    double stab_margin = 1e-9;
    double eig_tol = 1e-8;
    int max_iter = 500;
    int n_restarts = 8;
    double cond_limit = 1e12;
    uint64_t seed = 0x72696363ULL;
    // Optional precomputed pencil data shared across many queries.
    const struct RiccatiContext* context = nullptr;
};

/// Pencil data reused across membership queries for one realization.
struct RiccatiContext {
    PencilL pencil;
    BivariatePoly det_coeffs;
    std::vector<cplx> e_points;

    static RiccatiContext build(const Realization& r, double cond_limit = 1e12) {
        RiccatiContext ctx;
        ctx.pencil = assemble_L(r);
        ctx.det_coeffs = detL_coeffs(ctx.pencil, cond_limit);
        try {
            ctx.e_points = compute_E(ctx.det_coeffs);
        } catch (const DegenerateDetError&) {
            ctx.e_points.clear();
        }
        return ctx;
    }
};

/// Exact resolvent test for symbols with all poles in the closed disc
/// (n_+ = 0): lambda is in the resolvent iff R0 - lambda I is invertible and
/// alpha_circ = alpha - beta (R0 - lambda I)^{-1} gamma is stable.
/// Returns the decision and alpha_circ.
inline std::pair<bool, Mat> is_resolvent_alpha_only(const Realization& r, cplx lambda,
                                                    double eig_tol = 1e-8,
                                                    double stab_margin = 1e-9) {
    if (r.n_plus() != 0)
        throw ParseError("is_resolvent_alpha_only: requires n_plus = 0");
    const Mat d = r.R0 - lambda * Mat::Identity(r.m(), r.m());
    for (const cplx& mu : eigenvalues_of(r.R0))
        if (std::abs(mu - lambda) <= eig_tol) return {false, Mat(0, 0)};
    const Mat alpha_circ = r.alpha - r.beta * d.partialPivLu().solve(r.gamma);
    const bool stable = spectral_radius(alpha_circ) < 1.0 - stab_margin;
    return {stable, alpha_circ};
}

namespace detail {

struct ClosedLoop {
    Mat A_circ, alpha_circ;
    double rho_A, rho_alpha;
};

inline ClosedLoop closed_loop(const Realization& r, const Mat& q, const Mat& d) {
    ClosedLoop cl;
    const Mat dinv_c = d.partialPivLu().solve(r.C - r.gamma * q * r.A);
    cl.A_circ = r.A - r.B * dinv_c;
    cl.alpha_circ =
        r.alpha - (r.beta - r.alpha * q * r.B) * d.partialPivLu().solve(r.gamma);
    cl.rho_A = spectral_radius(cl.A_circ);
    cl.rho_alpha = spectral_radius(cl.alpha_circ);
    return cl;
}

// Newton step for F(Q) = Q - rhs(Q): the derivative is
// dF[Delta] = Delta - alpha_circ Delta A_circ, a Stein operator in the
// closed-loop matrices, solved through its Kronecker form.
inline bool newton_step(const RiccatiProblem& p, Mat& q, double cond_limit) {
    const Realization& r = p.real;
    const auto [residual, d] = riccati_residual(p, q, cond_limit);
    const ClosedLoop cl = closed_loop(r, q, d);
    const Index nr = q.rows(), nc = q.cols();
    const Mat lhs = Mat::Identity(nr * nc, nr * nc) -
                    kron(cl.A_circ.transpose(), cl.alpha_circ);
    if (condition_number(lhs) > cond_limit) return false;
    Vec rhs(nr * nc);
    for (Index j = 0; j < nc; ++j) rhs.segment(j * nr, nr) = -residual.col(j);
    const Vec delta = lhs.partialPivLu().solve(rhs);
    for (Index j = 0; j < nc; ++j) q.col(j) += delta.segment(j * nr, nr);
    return true;
}

// Damped fixed-point iteration, switching to Newton refinement once the
// residual drops below 1e-6. Returns true on convergence to ric_tol.
inline bool iterate_to_solution(const RiccatiProblem& p, Mat& q,
                                const RiccatiOptions& opt, double& out_residual) {
    double damping = 1.0;
    double prev_norm = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opt.max_iter; ++it) {
        Mat residual, d;
        try {
            std::tie(residual, d) = riccati_residual(p, q, opt.cond_limit);
        } catch (const DSingularError&) {
            return false;
        }
        const double rnorm = residual.norm();
        out_residual = rnorm;
        if (rnorm < opt.ric_tol * (1.0 + q.norm())) return true;

        if (rnorm < 1e-6) {
            // Close enough for Newton polishing.
            for (int nit = 0; nit < 30; ++nit) {
                if (!newton_step(p, q, opt.cond_limit)) return false;
                Mat res2, d2;
                try {
                    std::tie(res2, d2) = riccati_residual(p, q, opt.cond_limit);
                } catch (const DSingularError&) {
                    return false;
                }
                out_residual = res2.norm();
                if (out_residual < opt.ric_tol * (1.0 + q.norm())) return true;
            }
            return false;
        }

        if (rnorm > prev_norm * (1.0 + 1e-12)) {
            damping *= 0.5;
            if (damping < 1e-4) return false;
        }

        // Q <- (1-s) Q + s rhs(Q); rhs(Q) = Q - residual.
        q = q - damping * residual;
        prev_norm = rnorm;
    }
    return false;
}

// Number of zeros of det L(lambda, .) strictly inside the unit disc, with
// flags for zeros on or near the circle. A stabilizing solution forces
// exactly n_minus zeros inside (sigma(alpha_circ)) and the rest outside or
// at infinity (reciprocals of sigma(A_circ)); a mismatch certifies that no
// stabilizing solution exists.
struct ZeroCount {
    int inside = 0;
    bool on_circle = false;   // within 1e-12 of the circle
    bool near_circle = false; // within stab_margin
};

inline ZeroCount count_inside_zeros(const BivariatePoly& bp, cplx lambda,
                                    double stab_margin) {
    ZeroCount zc;
    const Coeffs pz = trimmed(bp.z_poly_at(lambda), 1e-12);
    for (const cplx& root : poly_roots(pz)) {
        const double gap = std::abs(std::abs(root) - 1.0);
        if (gap <= 1e-12) zc.on_circle = true;
        else if (gap <= stab_margin) zc.near_circle = true;
        else if (std::abs(root) < 1.0) ++zc.inside;
    }
    return zc;
}

} // namespace detail

/// Decide membership of lambda in the resolvent set.
///
/// Strategy: (a) lambda in E(Omega) is in the spectrum outright;
/// (b) an empty plus or minus part makes the Riccati equation vacuous and
/// the test exact; (c) otherwise the zero count of det L(lambda, .) is
/// checked (a mismatch with n_minus certifies spectrum membership), then a
/// damped fixed-point iteration with Newton polishing searches for a
/// stabilizing solution, restarting from random points when the converged
/// solution is not stabilizing. Failure to find one yields Unknown.
inline RiccatiOutcome solve_stabilizing(const RiccatiProblem& p,
                                        const RiccatiOptions& opt = {}) {
    const Realization& r = p.real;
    r.check_dims();
    RiccatiOutcome out;
    out.Q = Mat::Zero(r.n_minus(), r.n_plus());

    std::unique_ptr<RiccatiContext> local;
    const RiccatiContext* ctx = opt.context;
    if (ctx == nullptr) {
        local = std::make_unique<RiccatiContext>(
            RiccatiContext::build(r, opt.cond_limit));
        ctx = local.get();
    }

    for (const cplx& e : ctx->e_points)
        if (std::abs(e - p.lambda) <= opt.eig_tol) {
            out.verdict = Verdict::NotResolvent;
            out.certificate = "in-E(Omega)";
            return out;
        }

    // Vacuous Riccati equation: the unique solution is the empty matrix and
    // the stability test is exact.
    if (r.n_plus() == 0 || r.n_minus() == 0) {
        Mat d;
        try {
            std::tie(std::ignore, d) = riccati_residual(p, out.Q, opt.cond_limit);
        } catch (const DSingularError&) {
            out.verdict = Verdict::NotResolvent;
            out.certificate = "alpha-only-exact";
            return out;
        }
        for (const cplx& mu : eigenvalues_of(r.R0))
            if (std::abs(mu - p.lambda) <= opt.eig_tol) {
                out.verdict = Verdict::NotResolvent;
                out.certificate = "alpha-only-exact";
                return out;
            }
        const detail::ClosedLoop cl = detail::closed_loop(r, out.Q, d);
        out.A_circ = cl.A_circ;
        out.alpha_circ = cl.alpha_circ;
        out.rho_A_circ = cl.rho_A;
        out.rho_alpha_circ = cl.rho_alpha;
        out.residual = 0.0;
        const double rho = std::max(cl.rho_A, cl.rho_alpha);
        if (rho < 1.0 - opt.stab_margin) {
            out.verdict = Verdict::Resolvent;
            out.certificate = "alpha-only-exact";
        } else if (rho > 1.0 + opt.stab_margin) {
            out.verdict = Verdict::NotResolvent;
            out.certificate = "alpha-only-exact";
        } else {
            out.verdict = Verdict::Unknown;
            out.certificate = "alpha-only-boundary";
        }
        return out;
    }

    // Zero-count certificate from the pencil determinant.
    const detail::ZeroCount zc =
        detail::count_inside_zeros(ctx->det_coeffs, p.lambda, opt.stab_margin);
    if (zc.on_circle) {
        out.verdict = Verdict::NotResolvent;
        out.certificate = "in-essential-spectrum";
        return out;
    }
    if (zc.near_circle) {
        out.verdict = Verdict::Unknown;
        out.certificate = "near-essential-spectrum";
        return out;
    }
    if (zc.inside != static_cast<int>(r.n_minus())) {
        out.verdict = Verdict::NotResolvent;
        out.certificate = "nonzero-index";
        return out;
    }

    // Multi-start damped fixed point with Newton polish.
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double q_scale = std::max(r.beta.norm() * r.C.norm(), 1e-3);
    bool boundary_seen = false;
    for (int attempt = 0; attempt <= opt.n_restarts; ++attempt) {
        Mat q = Mat::Zero(r.n_minus(), r.n_plus());
        if (attempt > 0)
            for (Index i = 0; i < q.rows(); ++i)
                for (Index j = 0; j < q.cols(); ++j)
                    q(i, j) = q_scale * cplx(gauss(rng), gauss(rng)) / std::sqrt(2.0);

        double residual = std::numeric_limits<double>::infinity();
        if (!detail::iterate_to_solution(p, q, opt, residual)) continue;

        Mat res_mat, d;
        try {
            std::tie(res_mat, d) = riccati_residual(p, q, opt.cond_limit);
        } catch (const DSingularError&) {
            continue;
        }
        const detail::ClosedLoop cl = detail::closed_loop(r, q, d);
        const double rho = std::max(cl.rho_A, cl.rho_alpha);
        if (rho < 1.0 - opt.stab_margin) {
            out.verdict = Verdict::Resolvent;
            out.certificate = "stabilizing-riccati-solution";
            out.Q = q;
            out.A_circ = cl.A_circ;
            out.alpha_circ = cl.alpha_circ;
            out.rho_A_circ = cl.rho_A;
            out.rho_alpha_circ = cl.rho_alpha;
            out.residual = res_mat.norm();
            return out;
        }
        if (rho <= 1.0 + opt.stab_margin) boundary_seen = true;
    }

    out.verdict = Verdict::Unknown;
    out.certificate = boundary_seen ? "stability-boundary" : "no-stabilizing-solution-found";
    return out;
}

} // namespace toepspec

#endif
