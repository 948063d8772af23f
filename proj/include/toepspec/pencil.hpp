#ifndef TOEPSPEC_PENCIL_HPP
#define TOEPSPEC_PENCIL_HPP

#include <random>

#include "toepspec/gev.hpp"
#include "toepspec/realization.hpp"

namespace toepspec {

/// The linear pencil
///
///   L(lambda, z) = [ zA - I    0      B      ]
///                  [ 0         a - zI beta   ]
///                  [ zC        gamma  R0 - lambda I ]
///
/// stored as L = P0 + z P1 - lambda E with E = blkdiag(0, 0, I_m).
/// Eigenvalues of Omega(nu) on the unit circle, and the lambda-roots of
/// det L(., nu) at poles nu of the symbol, make up the essential spectrum
/// of the Toeplitz-like operator.
struct PencilL {
    Index m = 0, n_plus = 0, n_minus = 0;
    Mat P0, P1, Ehat;

    Index size() const { return n_plus + n_minus + m; }

    Mat M(cplx z) const { return P0 + z * P1; }

    Mat eval(cplx lambda, cplx z) const { return P0 + z * P1 - lambda * Ehat; }

    cplx det(cplx lambda, cplx z) const {
        return eval(lambda, z).partialPivLu().determinant();
    }

    // Blocks of the two-by-two decomposition with respect to the state part:
    // L = [Ahat(z), Bhat; Chat(z), Dhat(lambda)].
    Mat Ahat(cplx z) const {
        Mat a = Mat::Zero(n_plus + n_minus, n_plus + n_minus);
        a.topLeftCorner(n_plus, n_plus) =
            z * P1.topLeftCorner(n_plus, n_plus) + P0.topLeftCorner(n_plus, n_plus);
        a.bottomRightCorner(n_minus, n_minus) =
            P0.block(n_plus, n_plus, n_minus, n_minus) -
            z * Mat::Identity(n_minus, n_minus);
        return a;
    }
    Mat Bhat() const { return P0.topRightCorner(n_plus + n_minus, m); }
    Mat Chat(cplx z) const {
        Mat c(m, n_plus + n_minus);
        c.leftCols(n_plus) = z * P1.bottomLeftCorner(m, n_plus);
        c.rightCols(n_minus) = P0.block(n_plus + n_minus, n_plus, m, n_minus);
        return c;
    }
    Mat Dhat(cplx lambda) const {
        return P0.bottomRightCorner(m, m) - lambda * Mat::Identity(m, m);
    }
};

inline PencilL assemble_L(const Realization& r) {
    r.check_dims();
    PencilL pl;
    pl.m = r.m();
    pl.n_plus = r.n_plus();
    pl.n_minus = r.n_minus();
    const Index n = pl.size();
    pl.P0 = Mat::Zero(n, n);
    pl.P1 = Mat::Zero(n, n);
    pl.Ehat = Mat::Zero(n, n);

    const Index np = pl.n_plus, nm = pl.n_minus, m = pl.m;
    pl.P0.topLeftCorner(np, np) = -Mat::Identity(np, np);
    pl.P0.block(np, np, nm, nm) = r.alpha;
    pl.P0.topRightCorner(np, m) = r.B;
    pl.P0.block(np, np + nm, nm, m) = r.beta;
    pl.P0.block(np + nm, np, m, nm) = r.gamma;
    pl.P0.bottomRightCorner(m, m) = r.R0;

    pl.P1.topLeftCorner(np, np) = r.A;
    pl.P1.block(np, np, nm, nm) = -Mat::Identity(nm, nm);
    pl.P1.bottomLeftCorner(m, np) = r.C;

    pl.Ehat.bottomRightCorner(m, m) = Mat::Identity(m, m);
    return pl;
}

/// det L(lambda, z) as a bivariate polynomial: coeffs(k, l) multiplies
/// lambda^k z^l. Degree at most m in lambda and n_+ + n_- in z.
struct BivariatePoly {
    Mat coeffs;

    Index lambda_degree() const { return coeffs.rows() - 1; }
    Index z_degree() const { return coeffs.cols() - 1; }

    cplx eval(cplx lambda, cplx z) const {
        cplx acc(0.0);
        for (Index k = coeffs.rows(); k-- > 0;) {
            cplx row(0.0);
            for (Index l = coeffs.cols(); l-- > 0;) row = row * z + coeffs(k, l);
            acc = acc * lambda + row;
        }
        return acc;
    }

    /// Coefficients of d_l(lambda), the z^l slice.
    Coeffs lambda_slice(Index l) const {
        Coeffs out(static_cast<size_t>(coeffs.rows()));
        for (Index k = 0; k < coeffs.rows(); ++k)
            out[static_cast<size_t>(k)] = coeffs(k, l);
        return out;
    }

    /// Coefficients in z of det L(lambda0, z).
    Coeffs z_poly_at(cplx lambda0) const {
        Coeffs out(static_cast<size_t>(coeffs.cols()), cplx(0.0));
        for (Index l = 0; l < coeffs.cols(); ++l) {
            cplx acc(0.0);
            for (Index k = coeffs.rows(); k-- > 0;) acc = acc * lambda0 + coeffs(k, l);
            out[static_cast<size_t>(l)] = acc;
        }
        return out;
    }
};

namespace detail {

// Solve the Vandermonde system V c = values with V_{ab} = nodes[a]^b.
inline Vec vandermonde_solve(const std::vector<cplx>& nodes, const Vec& values,
                             double cond_limit) {
    const Index n = static_cast<Index>(nodes.size());
    Mat v(n, n);
    for (Index a = 0; a < n; ++a) {
        cplx p(1.0);
        for (Index b = 0; b < n; ++b) {
            v(a, b) = p;
            p *= nodes[static_cast<size_t>(a)];
        }
    }
    if (condition_number(v) > cond_limit)
        throw IllConditionedError("detL_coeffs: Vandermonde system too ill conditioned");
    return v.partialPivLu().solve(values);
}

inline std::vector<cplx> interpolation_nodes(Index count, double radius) {
    std::vector<cplx> nodes(static_cast<size_t>(count));
    for (Index i = 0; i < count; ++i)
        nodes[static_cast<size_t>(i)] =
            std::polar(radius, 2.0 * kPi * static_cast<double>(i) /
                                   static_cast<double>(count));
    return nodes;
}

} // namespace detail

/// Interpolate det L on a tensor grid of scaled roots of unity (radius 1.37,
/// off the unit circle to avoid symbol symmetries) and solve the two
/// Vandermonde systems for the coefficient matrix.
inline BivariatePoly detL_coeffs(const PencilL& pl, double cond_limit = 1e12) {
    const Index nl = pl.m + 1;
    const Index nz = pl.n_plus + pl.n_minus + 1;
    const std::vector<cplx> lam_nodes = detail::interpolation_nodes(nl, 1.37);
    const std::vector<cplx> z_nodes = detail::interpolation_nodes(nz, 1.37);

    Mat values(nl, nz);
    for (Index a = 0; a < nl; ++a)
        for (Index b = 0; b < nz; ++b)
            values(a, b) = pl.det(lam_nodes[static_cast<size_t>(a)],
                                  z_nodes[static_cast<size_t>(b)]);

    // First in lambda for each z node, then in z for each lambda power.
    Mat lam_coeffs(nl, nz);
    for (Index b = 0; b < nz; ++b)
        lam_coeffs.col(b) = detail::vandermonde_solve(lam_nodes, values.col(b),
                                                      cond_limit);
    BivariatePoly bp;
    bp.coeffs = Mat(nl, nz);
    for (Index k = 0; k < nl; ++k)
        bp.coeffs.row(k) =
            detail::vandermonde_solve(z_nodes, lam_coeffs.row(k).transpose(),
                                      cond_limit)
                .transpose();
    return bp;
}

/// The exceptional set E(Omega): lambda for which det(Omega(z) - lambda I)
/// vanishes identically in z, equivalently all z-slices d_l(lambda) of
/// det L vanish. At most m points. Throws DegenerateDet when every slice is
/// numerically zero.
inline std::vector<cplx> compute_E(const BivariatePoly& bp, double tol = 1e-7) {
    const Index nl = bp.coeffs.rows(), nz = bp.coeffs.cols();
    const double scale = bp.coeffs.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        throw DegenerateDetError("compute_E: det L vanishes identically");

    Index pivot = 0;
    double best = -1.0;
    for (Index l = 0; l < nz; ++l) {
        const double norm_l = bp.coeffs.col(l).norm();
        if (norm_l > best) {
            best = norm_l;
            pivot = l;
        }
    }
    if (best <= 1e-14 * scale)
        throw DegenerateDetError("compute_E: all lambda-slices vanish");

    const std::vector<cplx> roots = poly_roots(trimmed(bp.lambda_slice(pivot),
                                                       1e-12));
    std::vector<cplx> members;
    for (const RootCluster& cl : cluster_roots(roots, 1e-7)) {
        const double lam_scale = std::pow(1.0 + std::abs(cl.value),
                                          static_cast<double>(nl - 1));
        double worst = 0.0;
        for (Index l = 0; l < nz; ++l)
            worst = std::max(worst,
                             std::abs(poly_eval(bp.lambda_slice(l), cl.value)));
        if (worst < tol * scale * lam_scale) members.push_back(cl.value);
    }
    if (members.size() > static_cast<size_t>(nl - 1))
        throw NumericalError("compute_E: more than m candidate points");
    return members;
}

struct EssPointOptions {
    double eig_tol = 1e-8;          // distance to sigma(alpha) for the regular path
    double beta_tol = 1e-10;        // infinite-eigenvalue cut in the QZ route
    double singular_tol = 1e-10;    // |det| threshold for the identically-zero probe
    uint64_t seed = 0x70656e63ULL;
    double cond_limit = 1e12;
};

/// Result of sampling the essential spectrum at one unit-circle point nu.
struct EssPointsResult {
    std::vector<cplx> lambdas;         // essential spectrum points at this nu
    std::vector<cplx> pencil_lambdas;  // finite eigenvalues of (M(nu), Ehat)
    bool singular = false;             // det L(., nu) vanishes identically
    bool nu_regular = true;            // nu outside sigma(alpha)
    double crosscheck_residual = 0.0;  // max |det L(lambda, nu)| over lambdas
};

/// Sample sigma_ess at nu on the unit circle. For nu off sigma(alpha) the
/// points are the eigenvalues of Omega(nu), cross-checked against
/// det L(., nu); the finite generalized eigenvalues of (M(nu), Ehat) are
/// always computed as well. When det L(., nu) vanishes for every probe
/// lambda, the pencil is singular and the result carries the flag instead
/// of points.
inline EssPointsResult ess_points_at(const PencilL& pl, const Realization& r,
                                     cplx nu, const EssPointOptions& opt = {}) {
    if (std::abs(std::abs(nu) - 1.0) > 1e-12)
        throw ParseError("ess_points_at: nu must lie on the unit circle");

    EssPointsResult res;

    // Identically-zero probe: a polynomial of degree <= m vanishing at m+1
    // points vanishes identically. Five probes cover m <= 4.
    const int probes = pl.m <= 4 ? 5 : static_cast<int>(pl.m) + 2;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    bool all_zero = true;
    for (int i = 0; i < probes; ++i) {
        const cplx lam(2.0 * unit(rng), 2.0 * unit(rng));
        const Mat l = pl.eval(lam, nu);
        const double scale = std::max(hadamard_bound(l), 1e-300);
        if (std::abs(l.partialPivLu().determinant()) >= opt.singular_tol * scale) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) {
        res.singular = true;
        return res;
    }

    res.pencil_lambdas =
        finite_generalized_eigenvalues(pl.M(nu), pl.Ehat, opt.beta_tol);

    double dist_alpha = std::numeric_limits<double>::infinity();
    for (const cplx& mu : eigenvalues_of(r.alpha))
        dist_alpha = std::min(dist_alpha, std::abs(nu - mu));
    res.nu_regular = dist_alpha > opt.eig_tol;

    if (res.nu_regular) {
        res.lambdas = eigenvalues_of(eval_realization(r, nu, opt.cond_limit));
        for (const cplx& lam : res.lambdas) {
            const Mat l = pl.eval(lam, nu);
            const double scale = std::max(hadamard_bound(l), 1e-300);
            res.crosscheck_residual =
                std::max(res.crosscheck_residual,
                         std::abs(l.partialPivLu().determinant()) / scale);
        }
    } else {
        // Poles of the symbol are handled entirely through the pencil.
        res.lambdas = res.pencil_lambdas;
    }
    return res;
}

/// Sampled essential spectrum over a grid nu = e^{i theta}.
struct EssCloud {
    std::vector<double> thetas;                  // sampled angles
    std::vector<std::pair<double, cplx>> points; // (theta, lambda) samples
    bool whole_plane = false;                    // det L(., nu) = 0 for some nu
    std::vector<cplx> degenerate_nus;            // the nu where that happened
    std::vector<cplx> e_points;                  // E(Omega), appended to the cloud
};

/// Sweep theta_k = 2 pi k / n_theta, inserting the on-circle eigenvalues of
/// alpha exactly; E(Omega) membership points are appended (they belong to
/// the essential spectrum). whole_plane is set when any nu makes the pencil
/// singular in lambda.
inline EssCloud ess_spectrum_sweep(const Realization& r, int n_theta,
                                   const EssPointOptions& opt = {},
                                   double eps_circle = 1e-9) {
    if (n_theta < 8) throw ParseError("ess_spectrum_sweep: n_theta must be >= 8");
    const PencilL pl = assemble_L(r);

    std::vector<double> thetas;
    for (int k = 0; k < n_theta; ++k)
        thetas.push_back(2.0 * kPi * static_cast<double>(k) /
                         static_cast<double>(n_theta));
    for (const cplx& mu : eigenvalues_of(r.alpha))
        if (std::abs(std::abs(mu) - 1.0) <= eps_circle) {
            double th = std::arg(mu);
            if (th < 0.0) th += 2.0 * kPi;
            thetas.push_back(th);
        }
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                 thetas.end());

    EssCloud cloud;
    cloud.thetas = thetas;
    for (double th : thetas) {
        const cplx nu = std::polar(1.0, th);
        const EssPointsResult res = ess_points_at(pl, r, nu, opt);
        if (res.singular) {
            cloud.whole_plane = true;
            cloud.degenerate_nus.push_back(nu);
            continue;
        }
        for (const cplx& lam : res.lambdas) cloud.points.emplace_back(th, lam);
    }

    try {
        cloud.e_points = compute_E(detL_coeffs(pl, opt.cond_limit));
    } catch (const DegenerateDetError&) {
        // det L identically zero: every lambda already flagged via whole_plane.
        cloud.e_points.clear();
    }
    for (const cplx& lam : cloud.e_points)
        cloud.points.emplace_back(std::numeric_limits<double>::quiet_NaN(), lam);
    return cloud;
}

} // namespace toepspec

#endif
