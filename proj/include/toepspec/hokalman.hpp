#ifndef TOEPSPEC_HOKALMAN_HPP
#define TOEPSPEC_HOKALMAN_HPP

#include <Eigen/Eigenvalues>

#include "toepspec/hankel.hpp"
#include "toepspec/realization.hpp"

namespace toepspec {

/// Markov parameters a_j = C A^{j-1} B for j = 1..J; all zero when n_+ = 0.
inline std::vector<Mat> markov_plus(const Realization& r, int J) {
    if (J < 1) throw ParseError("markov_plus: J must be >= 1");
    const Index m = r.m();
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(J));
    if (r.n_plus() == 0) {
        out.assign(static_cast<size_t>(J), Mat::Zero(m, m));
        return out;
    }
    Mat power = Mat::Identity(r.n_plus(), r.n_plus());
    for (int j = 1; j <= J; ++j) {
        out.push_back(r.C * power * r.B);
        power = r.A * power;
    }
    return out;
}

/// Markov parameters a_{-j} = gamma alpha^{j-1} beta for j = 1..J.
inline std::vector<Mat> markov_minus(const Realization& r, int J) {
    if (J < 1) throw ParseError("markov_minus: J must be >= 1");
    const Index m = r.m();
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(J));
    if (r.n_minus() == 0) {
        out.assign(static_cast<size_t>(J), Mat::Zero(m, m));
        return out;
    }
    Mat power = Mat::Identity(r.n_minus(), r.n_minus());
    for (int j = 1; j <= J; ++j) {
        out.push_back(r.gamma * power * r.beta);
        power = r.alpha * power;
    }
    return out;
}

inline CoeffWindow coeff_window(const Realization& r, int J) {
    CoeffWindow cw;
    cw.m = static_cast<int>(r.m());
    cw.J = J;
    cw.a0 = r.R0;
    cw.plus = markov_plus(r, J);
    cw.minus = markov_minus(r, J);
    return cw;
}

/// Growth certificate for the minus coefficients: M is the size of the
/// largest Jordan block of alpha at an eigenvalue on the unit circle, and
/// K the largest observed ratio ||a_{-j}|| / binom(j, M-1) over the window.
struct GrowthReport {
    int M = 1;
    double K = 0.0;
    bool ok = true;
    int worst_j = 0;
};

namespace detail {

// Largest Jordan block size at eigenvalue mu, from the rank chain of
// (t - mu I)^k on the Schur triangular factor. Ranks use the absolute
// threshold (tol * scale)^k: the k-th power of a numerically nilpotent
// block has norm of that order, and a relative cut would resurrect it.
inline int largest_jordan_block(const Mat& schur_t, cplx mu, int algebraic_mult,
                                double tol) {
    const Index n = schur_t.rows();
    const Mat shifted = schur_t - mu * Mat::Identity(n, n);
    const double scale = 1.0 + shifted.norm();
    Mat power = Mat::Identity(n, n);
    Index prev_rank = n;
    for (int k = 1; k <= algebraic_mult; ++k) {
        power = power * shifted;
        const Index rk = numerical_rank_absolute(power, std::pow(tol * scale, k));
        if (rk == prev_rank) return k - 1;
        prev_rank = rk;
    }
    return algebraic_mult;
}

} // namespace detail

inline GrowthReport growth_bound_check(const Realization& r, int J,
                                       double eps_circle = 1e-9,
                                       double jordan_tol = 1e-7) {
    if (J < 2) throw ParseError("growth_bound_check: J must be >= 2");
    GrowthReport rep;
    if (r.n_minus() == 0) return rep;

    Eigen::ComplexSchur<Mat> schur(r.alpha);
    if (schur.info() != Eigen::Success)
        throw NumericalError("growth_bound_check: Schur decomposition failed");
    const Mat t = schur.matrixT();
    std::vector<cplx> eigs(static_cast<size_t>(t.rows()));
    for (Index i = 0; i < t.rows(); ++i) eigs[static_cast<size_t>(i)] = t(i, i);
    for (const RootCluster& cl : cluster_roots(eigs, jordan_tol)) {
        if (std::abs(std::abs(cl.value) - 1.0) > eps_circle) continue;
        rep.M = std::max(rep.M, detail::largest_jordan_block(t, cl.value,
                                                             cl.multiplicity,
                                                             jordan_tol));
    }

    const std::vector<Mat> minus = markov_minus(r, J);
    std::vector<double> ratios(static_cast<size_t>(J));
    for (int j = 1; j <= J; ++j) {
        // binom(j, M-1) vanishes for j < M-1; clamp to 1 so small-j blocks
        // are measured rather than divided away.
        const double weight = std::max(binomial(j, rep.M - 1), 1.0);
        const double ratio = minus[static_cast<size_t>(j - 1)].norm() / weight;
        ratios[static_cast<size_t>(j - 1)] = ratio;
        if (ratio > rep.K) {
            rep.K = ratio;
            rep.worst_j = j;
        }
    }

    // Boundedness heuristic: the tail quarter of the ratio sequence must not
    // exceed the head maximum by more than 10%.
    const int head_end = std::max(1, (3 * J) / 4);
    double head_max = 0.0, tail_max = 0.0;
    for (int j = 1; j <= J; ++j) {
        const double v = ratios[static_cast<size_t>(j - 1)];
        if (j <= head_end) head_max = std::max(head_max, v);
        else tail_max = std::max(tail_max, v);
    }
    rep.ok = tail_max <= 1.1 * head_max + 1e-12;
    return rep;
}

/// Finite section of the block Toeplitz matrix: block (i,j) = a_{i-j},
/// N block rows and columns.
inline Mat toeplitz_truncation(const CoeffWindow& cw, int N) {
    cw.validate();
    if (N < 1) throw ParseError("toeplitz_truncation: N must be >= 1");
    if (N > cw.J + 1)
        throw InsufficientWindowError("toeplitz_truncation: N exceeds J+1");
    const int m = cw.m;
    Mat out(N * m, N * m);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) out.block(i * m, j * m, m, m) = cw.a(i - j);
    return out;
}

/// Image of the monomial z^n w under the operator, coefficientwise:
/// c_j = a_{j-n} w for 0 <= j <= J, plus the strictly-proper remainder
/// gamma alpha^n (zI - alpha)^{-1} beta w reported by its data.
struct MonomialImage {
    std::vector<Vec> coeffs;
    Mat gamma_n;   // gamma * alpha^n, m x n_minus
    Mat alpha;     // n_minus x n_minus
    Vec beta_w;    // beta * w, n_minus
};

inline MonomialImage apply_symbol_to_monomial(const Realization& r, int n,
                                              const Vec& w, int J) {
    if (n < 0) throw ParseError("apply_symbol_to_monomial: n must be >= 0");
    if (J < n) throw ParseError("apply_symbol_to_monomial: J must be >= n");
    if (w.size() != r.m()) throw ParseError("apply_symbol_to_monomial: w has wrong size");

    const std::vector<Mat> plus = markov_plus(r, std::max(1, J - n));
    const std::vector<Mat> minus = n > 0 ? markov_minus(r, n) : std::vector<Mat>{};

    MonomialImage img;
    for (int j = 0; j <= J; ++j) {
        const int k = j - n;
        Mat a;
        if (k == 0) a = r.R0;
        else if (k > 0) a = plus[static_cast<size_t>(k - 1)];
        else a = minus[static_cast<size_t>(-k - 1)];
        img.coeffs.push_back(a * w);
    }

    const Index nm = r.n_minus();
    if (nm == 0) {
        img.gamma_n = Mat(r.m(), 0);
        img.alpha = Mat(0, 0);
        img.beta_w = Vec(0);
    } else {
        Mat alpha_n = Mat::Identity(nm, nm);
        for (int i = 0; i < n; ++i) alpha_n = r.alpha * alpha_n;
        img.gamma_n = r.gamma * alpha_n;
        img.alpha = r.alpha;
        img.beta_w = r.beta * w;
    }
    return img;
}

} // namespace toepspec

#endif
