#ifndef TOEPSPEC_LINALG_HPP
#define TOEPSPEC_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "toepspec/errors.hpp"

namespace toepspec {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

/// Eigenvalues of a square complex matrix; empty matrix gives an empty list.
inline std::vector<cplx> eigenvalues_of(const Mat& a) {
    if (a.rows() == 0) return {};
    Eigen::ComplexEigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigenvalue computation did not converge");
    std::vector<cplx> out(static_cast<size_t>(a.rows()));
    for (Index i = 0; i < a.rows(); ++i) out[static_cast<size_t>(i)] = es.eigenvalues()(i);
    return out;
}

/// Spectral radius; an empty matrix is vacuously stable (radius 0).
inline double spectral_radius(const Mat& a) {
    double r = 0.0;
    for (const cplx& ev : eigenvalues_of(a)) r = std::max(r, std::abs(ev));
    return r;
}

struct RankResult {
    Index rank = 0;
    double sigma_max = 0.0;
    // True when some singular value sits within a factor 10 of the cut, so
    // the numerical rank is not well determined.
    bool ambiguous = false;
};

/// Numerical rank via SVD: singular values below rank_tol * sigma_max count as zero.
inline RankResult numerical_rank(const Mat& a, double rank_tol) {
    RankResult res;
    if (a.rows() == 0 || a.cols() == 0) return res;
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& sv = svd.singularValues();
    res.sigma_max = sv(0);
    if (res.sigma_max == 0.0) return res;
    const double cut = rank_tol * res.sigma_max;
    Index r = 0;
    while (r < sv.size() && sv(r) >= cut) ++r;
    res.rank = r;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut / 10.0 && sv(i) < cut * 10.0) res.ambiguous = true;
    return res;
}

/// Rank with an absolute singular value threshold (for matrices whose own
/// scale may be numerically zero, e.g. powers of nilpotent blocks).
inline Index numerical_rank_absolute(const Mat& a, double threshold) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& sv = svd.singularValues();
    Index r = 0;
    while (r < sv.size() && sv(r) >= threshold) ++r;
    return r;
}

/// 2-norm condition number; returns +inf for singular or empty input.
inline double condition_number(const Mat& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(a);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

/// Solve a*x = b, throwing when the condition number exceeds cond_limit.
inline Mat solve_checked(const Mat& a, const Mat& b, double cond_limit,
                         const char* context) {
    if (a.rows() == 0) return Mat(0, b.cols());
    if (condition_number(a) > cond_limit)
        throw IllConditionedError(std::string(context) +
                                  ": matrix condition exceeds threshold");
    return a.fullPivLu().solve(b);
}

/// Hadamard bound prod_i ||row_i||_2, a natural scale for |det|.
inline double hadamard_bound(const Mat& a) {
    double p = 1.0;
    for (Index i = 0; i < a.rows(); ++i) p *= a.row(i).norm();
    return p;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
    return r;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

namespace detail {

// Hungarian algorithm (Kuhn-Munkres with potentials), O(n^3), min-sum.
// Returns the column assigned to each row.
inline std::vector<int> hungarian_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    const double inf = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[p[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

} // namespace detail

/// Optimal matching distance between two equal-size multisets of complex
/// numbers: pair the points minimizing total distance, report the largest
/// paired distance. Used to compare eigenvalue lists.
inline double matching_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size())
        throw Error("matching_distance: size mismatch");
    const int n = static_cast<int>(a.size());
    if (n == 0) return 0.0;
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost[i][j] = std::abs(a[i] - b[j]);
    const std::vector<int> match = detail::hungarian_assignment(cost);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, cost[i][match[i]]);
    return worst;
}

} // namespace toepspec

#endif
