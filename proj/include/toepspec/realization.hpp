#ifndef TOEPSPEC_REALIZATION_HPP
#define TOEPSPEC_REALIZATION_HPP

#include <random>
#include <vector>

#include "toepspec/hankel.hpp"
#include "toepspec/symbol.hpp"

namespace toepspec {

/// State space realization
///
///   Omega(z) = R0 + z C (I - z A)^{-1} B + gamma (z I - alpha)^{-1} beta
///
/// with A stable (all eigenvalues in the open unit disc) carrying the part
/// analytic on the closed disc, and alpha semi-stable (closed disc) carrying
/// the poles in the closed disc. Either state dimension may be zero, in
/// which case the corresponding blocks are empty and contribute nothing.
struct Realization {
    Mat R0;
    Mat A, B, C;
    Mat alpha, beta, gamma;

    Index m() const { return R0.rows(); }
    Index n_plus() const { return A.rows(); }
    Index n_minus() const { return alpha.rows(); }

    void check_dims() const {
        const Index mm = m(), np = n_plus(), nm = n_minus();
        if (R0.cols() != mm) throw ParseError("Realization: R0 must be square");
        if (A.cols() != np || B.rows() != np || B.cols() != mm || C.rows() != mm ||
            C.cols() != np)
            throw ParseError("Realization: plus-part dimensions inconsistent");
        if (alpha.cols() != nm || beta.rows() != nm || beta.cols() != mm ||
            gamma.rows() != mm || gamma.cols() != nm)
            throw ParseError("Realization: minus-part dimensions inconsistent");
    }
};

inline Mat controllability_matrix(const Mat& f, const Mat& g) {
    const Index n = f.rows();
    if (n == 0) return Mat(0, 0);
    Mat out(n, n * g.cols());
    Mat blk = g;
    for (Index j = 0; j < n; ++j) {
        out.middleCols(j * g.cols(), g.cols()) = blk;
        blk = f * blk;
    }
    return out;
}

inline Mat observability_matrix(const Mat& h, const Mat& f) {
    const Index n = f.rows();
    if (n == 0) return Mat(0, 0);
    Mat out(n * h.rows(), n);
    Mat blk = h;
    for (Index i = 0; i < n; ++i) {
        out.middleRows(i * h.rows(), h.rows()) = blk;
        blk = blk * f;
    }
    return out;
}

/// True when both triples (C,A,B) and (gamma,alpha,beta) are minimal:
/// controllability and observability matrices have full numerical rank.
inline bool is_minimal(const Realization& r, double rank_tol = 1e-9) {
    if (numerical_rank(controllability_matrix(r.A, r.B), rank_tol).rank != r.n_plus())
        return false;
    if (numerical_rank(observability_matrix(r.C, r.A), rank_tol).rank != r.n_plus())
        return false;
    if (numerical_rank(controllability_matrix(r.alpha, r.beta), rank_tol).rank !=
        r.n_minus())
        return false;
    if (numerical_rank(observability_matrix(r.gamma, r.alpha), rank_tol).rank !=
        r.n_minus())
        return false;
    return true;
}

/// Check stability of A, semi-stability of alpha, and minimality.
/// Semi-stability is tested on clustered eigenvalue means: the computed
/// eigenvalues of an on-circle Jordan block of size k scatter like the k-th
/// root of the rounding error, but their mean is accurate. The clustering
/// tolerance widens with the dimension of alpha to cover that scatter,
/// capped so genuine instability stays detectable.
inline void validate_realization(const Realization& r, double rank_tol = 1e-9,
                                 double eps_circle = 1e-9) {
    r.check_dims();
    if (spectral_radius(r.A) >= 1.0)
        throw NumericalError("Realization: A is not stable");
    const double defect_scatter =
        r.n_minus() > 0
            ? 20.0 * std::pow(std::numeric_limits<double>::epsilon(),
                              1.0 / static_cast<double>(r.n_minus()))
            : 0.0;
    const double cluster_tol = std::clamp(defect_scatter, 1e-7, 1e-4);
    for (const RootCluster& cl : cluster_roots(eigenvalues_of(r.alpha), cluster_tol))
        if (std::abs(cl.value) > 1.0 + eps_circle)
            throw NumericalError("Realization: alpha is not semi-stable");
    if (!is_minimal(r, rank_tol))
        throw NumericalError("Realization: triples are not minimal");
}

/// Evaluate the realization formula. Throws PoleHit when I - zA or zI - alpha
/// is too ill conditioned (z near an eigenvalue of alpha or a reciprocal
/// eigenvalue of A).
inline Mat eval_realization(const Realization& r, cplx z, double cond_limit = 1e12) {
    Mat out = r.R0;
    if (r.n_plus() > 0) {
        const Mat lhs = Mat::Identity(r.n_plus(), r.n_plus()) - z * r.A;
        if (condition_number(lhs) > cond_limit)
            throw PoleHitError("eval_realization: z is near a pole of the plus part");
        out += z * r.C * lhs.partialPivLu().solve(r.B);
    }
    if (r.n_minus() > 0) {
        const Mat lhs = z * Mat::Identity(r.n_minus(), r.n_minus()) - r.alpha;
        if (condition_number(lhs) > cond_limit)
            throw PoleHitError("eval_realization: z is near a pole of the minus part");
        out += r.gamma * lhs.partialPivLu().solve(r.beta);
    }
    return out;
}

struct RealizeOptions {
    double eps_circle = 1e-9;
    double cluster_tol = 1e-7;
    double rank_tol = 1e-9;
    double cond_limit = 1e12;
    int validate_samples = 50;
    uint64_t seed = 0x746f65707370ULL;
};

namespace detail {

// Jordan-structured triple realizing sum_l R_l (z-p)^{-l} for one pole:
// alpha = J_k(p) (x) I_m, beta = e_k (x) I_m, gamma = [R_k, ..., R_1].
struct JordanPiece {
    Mat alpha, beta, gamma;
};

inline JordanPiece jordan_piece(cplx pole, const std::vector<Mat>& residues, int m) {
    const int k = static_cast<int>(residues.size());
    JordanPiece piece;
    piece.alpha = Mat::Zero(k * m, k * m);
    for (int b = 0; b < k; ++b) {
        piece.alpha.block(b * m, b * m, m, m) = pole * Mat::Identity(m, m);
        if (b + 1 < k)
            piece.alpha.block(b * m, (b + 1) * m, m, m) = Mat::Identity(m, m);
    }
    piece.beta = Mat::Zero(k * m, m);
    piece.beta.block((k - 1) * m, 0, m, m) = Mat::Identity(m, m);
    piece.gamma = Mat(m, k * m);
    for (int b = 0; b < k; ++b)
        piece.gamma.middleCols(b * m, m) = residues[static_cast<size_t>(k - 1 - b)];
    return piece;
}

} // namespace detail

/// Split the symbol by pole location and build a minimal realization:
///  - terms with poles in the closed disc (after the eps_circle snap) form
///    the minus part, assembled as a direct sum of Jordan pieces and then
///    reduced to minimality through its Markov sequence;
///  - the remainder is analytic on the closed disc; its Taylor coefficients
///    at 0 feed the realization algorithm for the plus part, and R0 is the
///    value at 0.
/// The result is validated against the rational form at random sample
/// points to relative tolerance 1e-8.
inline Realization split_and_realize(const RationalMatrix& sym,
                                     const RealizeOptions& opt = {}) {
    const int m = sym.m;
    const PartialFraction pf = partial_fractions(sym, opt.cluster_tol, opt.cond_limit);

    // Partition terms by the snapped pole classification.
    std::vector<PartialTerm> disc_terms, outside_terms;
    for (const PartialTerm& t : pf.terms) {
        const double r = std::abs(t.pole);
        if (r < 1.0 || std::abs(r - 1.0) <= opt.eps_circle) disc_terms.push_back(t);
        else outside_terms.push_back(t);
    }

    Realization out;

    // Minus part: direct sum of Jordan pieces, one per closed-disc pole.
    {
        std::vector<detail::JordanPiece> pieces;
        Index raw_dim = 0;
        for (size_t i = 0; i < disc_terms.size();) {
            const cplx pole = disc_terms[i].pole;
            std::vector<Mat> residues;
            while (i < disc_terms.size() && disc_terms[i].pole == pole) {
                residues.push_back(disc_terms[i].residue);
                ++i;
            }
            pieces.push_back(detail::jordan_piece(pole, residues, m));
            raw_dim += pieces.back().alpha.rows();
        }
        Mat alpha_raw = Mat::Zero(raw_dim, raw_dim);
        Mat beta_raw = Mat::Zero(raw_dim, m);
        Mat gamma_raw = Mat::Zero(m, raw_dim);
        Index off = 0;
        for (const auto& piece : pieces) {
            const Index d = piece.alpha.rows();
            alpha_raw.block(off, off, d, d) = piece.alpha;
            beta_raw.middleRows(off, d) = piece.beta;
            gamma_raw.middleCols(off, d) = piece.gamma;
            off += d;
        }
        if (raw_dim == 0) {
            out.alpha = Mat(0, 0);
            out.beta = Mat(0, m);
            out.gamma = Mat(m, 0);
        } else {
            const int J = static_cast<int>(2 * raw_dim + 2);
            std::vector<Mat> markov;
            Mat power = Mat::Identity(raw_dim, raw_dim);
            for (int j = 1; j <= J; ++j) {
                markov.push_back(gamma_raw * power * beta_raw);
                power = alpha_raw * power;
            }
            const MinimalTriple t = minimal_from_coeffs(markov, m, opt.rank_tol);
            out.alpha = t.F;
            out.beta = t.G;
            out.gamma = t.H;
        }
    }

    // Plus part: Taylor coefficients of poly_part plus expansions of the
    // outside-pole terms, (z-p)^{-l} = sum_j (-1)^l binom(j+l-1, l-1) p^{-l-j} z^j.
    {
        const Index outside_orders = static_cast<Index>(outside_terms.size());
        const Index poly_deg = static_cast<Index>(pf.poly_part.size()) - 1;
        const Index dim_bound = m * (poly_deg + outside_orders);
        const int J = static_cast<int>(2 * dim_bound + 2);

        std::vector<Mat> taylor(static_cast<size_t>(J + 1), Mat::Zero(m, m));
        for (size_t k = 0; k < pf.poly_part.size() && k <= static_cast<size_t>(J); ++k)
            taylor[k] += pf.poly_part[k];
        for (const PartialTerm& t : outside_terms) {
            const double sign = (t.order % 2 == 0) ? 1.0 : -1.0;
            cplx pinv_pow = std::pow(t.pole, -t.order);
            for (int j = 0; j <= J; ++j) {
                taylor[static_cast<size_t>(j)] +=
                    sign * binomial(j + t.order - 1, t.order - 1) * pinv_pow * t.residue;
                pinv_pow /= t.pole;
            }
        }

        out.R0 = taylor[0];
        if (J == 0 || dim_bound == 0) {
            out.A = Mat(0, 0);
            out.B = Mat(0, m);
            out.C = Mat(m, 0);
        } else {
            std::vector<Mat> markov(taylor.begin() + 1, taylor.end());
            const MinimalTriple t = minimal_from_coeffs(markov, m, opt.rank_tol);
            out.A = t.F;
            out.B = t.G;
            out.C = t.H;
        }
    }

    validate_realization(out, opt.rank_tol, opt.eps_circle);

    // Cross-check against the rational form at random non-pole points.
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> radius(0.2, 2.5), angle(0.0, 2.0 * kPi);
    int done = 0, attempts = 0;
    while (done < opt.validate_samples && attempts < 40 * opt.validate_samples) {
        ++attempts;
        const cplx z = std::polar(radius(rng), angle(rng));
        bool near_pole = false;
        for (const PartialTerm& t : pf.terms)
            if (std::abs(z - t.pole) < 1e-3) near_pole = true;
        if (near_pole) continue;
        Mat ref, got;
        try {
            ref = eval_rational_matrix(sym, z);
            got = eval_realization(out, z, opt.cond_limit);
        } catch (const PoleHitError&) {
            continue;
        }
        const double scale = std::max(1.0, ref.norm());
        if ((ref - got).norm() > 1e-8 * scale)
            throw NumericalError("split_and_realize: realization disagrees with "
                                 "the rational form");
        ++done;
    }
    return out;
}

} // namespace toepspec

#endif
