#ifndef TOEPSPEC_HANKEL_HPP
#define TOEPSPEC_HANKEL_HPP

#include <vector>

#include "toepspec/linalg.hpp"

namespace toepspec {

/// Two-sided window of block Toeplitz coefficients: a0, a_1..a_J (plus)
/// and a_{-1}..a_{-J} (minus), each block m x m.
struct CoeffWindow {
    int m = 0;
    int J = 0;
    Mat a0;
    std::vector<Mat> plus;
    std::vector<Mat> minus;

    void validate() const {
        if (m <= 0) throw ParseError("CoeffWindow: m must be positive");
        if (J <= 0) throw ParseError("CoeffWindow: J must be positive");
        if (a0.rows() != m || a0.cols() != m)
            throw ParseError("CoeffWindow: a0 must be m x m");
        if (plus.size() != static_cast<size_t>(J) || minus.size() != static_cast<size_t>(J))
            throw ParseError("CoeffWindow: plus/minus must have length J");
        for (const Mat& blk : plus)
            if (blk.rows() != m || blk.cols() != m)
                throw ParseError("CoeffWindow: plus block is not m x m");
        for (const Mat& blk : minus)
            if (blk.rows() != m || blk.cols() != m)
                throw ParseError("CoeffWindow: minus block is not m x m");
    }

    /// Signed coefficient a_k; zero outside the window for |k| > J is an error.
    const Mat& a(int k) const {
        if (k == 0) return a0;
        if (k > 0) {
            if (k > J) throw InsufficientWindowError("CoeffWindow: index beyond window");
            return plus[static_cast<size_t>(k - 1)];
        }
        if (-k > J) throw InsufficientWindowError("CoeffWindow: index beyond window");
        return minus[static_cast<size_t>(-k - 1)];
    }
};

/// Block Hankel with block (i,j) = coeffs[i+j] (0-based), blocks m x m,
/// k block rows and columns. coeffs[r] holds a_{r+1}.
inline Mat block_hankel(const std::vector<Mat>& coeffs, int k, int m) {
    if (static_cast<size_t>(2 * k - 1) > coeffs.size())
        throw InsufficientWindowError("block_hankel: need 2k-1 coefficients");
    Mat h(k * m, k * m);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            h.block(i * m, j * m, m, m) = coeffs[static_cast<size_t>(i + j)];
    return h;
}

/// The pair H_k^+ (from a_1, a_2, ...) and H_k^- (from a_{-1}, a_{-2}, ...).
struct HankelPair {
    int k = 0;
    Mat Hplus;
    Mat Hminus;
};

inline HankelPair hankel_pair(const CoeffWindow& cw, int k) {
    cw.validate();
    if (2 * k - 1 > cw.J)
        throw InsufficientWindowError("hankel_pair: 2k-1 exceeds window length J");
    return {k, block_hankel(cw.plus, k, cw.m), block_hankel(cw.minus, k, cw.m)};
}

struct HankelRankReport {
    std::vector<Index> ranks_plus;
    std::vector<Index> ranks_minus;
    Index n_plus = 0;
    Index n_minus = 0;
    bool stabilized_plus = true;
    bool stabilized_minus = true;
};

/// Numerical ranks of H_k^+/- for k = 1..kmax. n_+/- are the maxima;
/// stabilized_* is false when the rank is still increasing at kmax.
inline HankelRankReport hankel_ranks(const CoeffWindow& cw, int kmax,
                                     double rank_tol = 1e-9) {
    if (2 * kmax - 1 > cw.J)
        throw InsufficientWindowError("hankel_ranks: need J >= 2*kmax - 1");
    HankelRankReport rep;
    for (int k = 1; k <= kmax; ++k) {
        const HankelPair hp = hankel_pair(cw, k);
        rep.ranks_plus.push_back(numerical_rank(hp.Hplus, rank_tol).rank);
        rep.ranks_minus.push_back(numerical_rank(hp.Hminus, rank_tol).rank);
    }
    rep.n_plus = *std::max_element(rep.ranks_plus.begin(), rep.ranks_plus.end());
    rep.n_minus = *std::max_element(rep.ranks_minus.begin(), rep.ranks_minus.end());
    if (kmax >= 2) {
        rep.stabilized_plus = rep.ranks_plus[static_cast<size_t>(kmax - 1)] ==
                              rep.ranks_plus[static_cast<size_t>(kmax - 2)];
        rep.stabilized_minus = rep.ranks_minus[static_cast<size_t>(kmax - 1)] ==
                               rep.ranks_minus[static_cast<size_t>(kmax - 2)];
    }
    return rep;
}

/// Minimal triple (F, G, H) with H F^{j-1} G = coeffs[j-1] (the j-th Markov
/// parameter). State dimension equals the stabilized numerical Hankel rank.
struct MinimalTriple {
    Mat F, G, H;

    Index state_dim() const { return F.rows(); }

    std::vector<Mat> markov(int J) const {
        std::vector<Mat> out;
        Mat power = Mat::Identity(F.rows(), F.rows());
        for (int j = 1; j <= J; ++j) {
            out.push_back(H * power * G);
            power = F * power;
        }
        return out;
    }
};

/// Ho-Kalman realization of a finite Markov sequence: economy SVD of the
/// block Hankel H_k with k = stabilized rank + 1, balanced factors, F from
/// the row-shifted observability factor. Throws RankUndetermined when the
/// singular value gap around rank_tol is below a factor 10, and
/// InsufficientWindow when fewer than 2n+1 coefficients are supplied.
inline MinimalTriple minimal_from_coeffs(const std::vector<Mat>& coeffs, int m,
                                         double rank_tol = 1e-9) {
    for (const Mat& c : coeffs)
        if (c.rows() != m || c.cols() != m)
            throw ParseError("minimal_from_coeffs: blocks must be m x m");

    double scale = 0.0;
    for (const Mat& c : coeffs) scale = std::max(scale, c.cwiseAbs().maxCoeff());
    if (coeffs.empty() || scale == 0.0) {
        MinimalTriple t;
        t.F = Mat(0, 0);
        t.G = Mat(0, m);
        t.H = Mat(m, 0);
        return t;
    }

    // Stabilize the Hankel rank over the window.
    const int kcap = static_cast<int>((coeffs.size() + 1) / 2);
    Index n = 0;
    for (int k = 1; k <= kcap; ++k) {
        const RankResult rr = numerical_rank(block_hankel(coeffs, k, m), rank_tol);
        if (rr.ambiguous)
            throw RankUndeterminedError(
                "minimal_from_coeffs: singular values straddle rank_tol");
        if (rr.rank > n) n = rr.rank;
    }

    const int k = static_cast<int>(n) + 1;
    if (static_cast<size_t>(2 * k - 1) > coeffs.size())
        throw InsufficientWindowError(
            "minimal_from_coeffs: need at least 2n+1 coefficients");

    const Mat hank = block_hankel(coeffs, k, m);
    Eigen::JacobiSVD<Mat> svd(hank, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Mat u = svd.matrixU().leftCols(n);
    Mat v = svd.matrixV().leftCols(n);
    Vec sqrt_sv(n);
    for (Index i = 0; i < n; ++i) sqrt_sv(i) = std::sqrt(sv(i));

    // Balanced coordinates: obs = U sqrt(S), ctrl = sqrt(S) V^*.
    Mat obs = u * sqrt_sv.asDiagonal();
    Mat ctrl = sqrt_sv.asDiagonal() * v.adjoint();

    MinimalTriple t;
    t.H = obs.topRows(m);
    t.G = ctrl.leftCols(m);
    const Mat obs_up = obs.topRows((k - 1) * m);
    const Mat obs_down = obs.bottomRows((k - 1) * m);
    t.F = obs_up.completeOrthogonalDecomposition().solve(obs_down);

    // Reconstruction contract.
    double err = 0.0;
    const std::vector<Mat> rebuilt = t.markov(static_cast<int>(coeffs.size()));
    for (size_t j = 0; j < coeffs.size(); ++j)
        err = std::max(err, (rebuilt[j] - coeffs[j]).cwiseAbs().maxCoeff());
    if (err >= 1e-8 * (1.0 + scale))
        throw NumericalError("minimal_from_coeffs: Markov reconstruction error too large");
    return t;
}

} // namespace toepspec

#endif
