#ifndef TOEPSPEC_GEV_HPP
#define TOEPSPEC_GEV_HPP

#include <complex>
#include <utility>
#include <vector>

#include "toepspec/linalg.hpp"

// LAPACK complex QZ driver; declared directly to avoid the lapacke complex
// type configuration dance.
extern "C" {
void zggev_(const char* jobvl, const char* jobvr, const int* n,
            std::complex<double>* a, const int* lda, std::complex<double>* b,
            const int* ldb, std::complex<double>* alpha,
            std::complex<double>* beta, std::complex<double>* vl,
            const int* ldvl, std::complex<double>* vr, const int* ldvr,
            std::complex<double>* work, const int* lwork, double* rwork,
            int* info);
}

namespace toepspec {

struct GeneralizedEigenPair {
    cplx alpha;
    cplx beta;
};

/// All generalized eigenvalue pairs (alpha_i, beta_i) of the pencil
/// a - lambda*b via the QZ decomposition. lambda_i = alpha_i / beta_i,
/// infinite when beta_i vanishes.
inline std::vector<GeneralizedEigenPair> generalized_eigenpairs(Mat a, Mat b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw Error("generalized_eigenpairs: square matrices of equal size required");
    const int n = static_cast<int>(a.rows());
    if (n == 0) return {};
    std::vector<cplx> alpha(static_cast<size_t>(n)), beta(static_cast<size_t>(n));
    std::vector<double> rwork(static_cast<size_t>(8 * n));
    int info = 0;
    const int ione = 1;
    int lwork = -1;
    cplx wk_query;
    zggev_("N", "N", &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(),
           nullptr, &ione, nullptr, &ione, &wk_query, &lwork, rwork.data(), &info);
    if (info != 0) throw NumericalError("zggev workspace query failed");
    lwork = static_cast<int>(wk_query.real());
    std::vector<cplx> work(static_cast<size_t>(std::max(lwork, 1)));
    zggev_("N", "N", &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(),
           nullptr, &ione, nullptr, &ione, work.data(), &lwork, rwork.data(), &info);
    if (info != 0) throw NumericalError("zggev failed to converge");
    std::vector<GeneralizedEigenPair> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = {alpha[static_cast<size_t>(i)],
                                       beta[static_cast<size_t>(i)]};
    return out;
}

/// Finite generalized eigenvalues of (a, b): pairs with |beta| below
/// beta_tol relative to the largest |beta| are classified infinite and
/// dropped.
inline std::vector<cplx> finite_generalized_eigenvalues(const Mat& a, const Mat& b,
                                                        double beta_tol = 1e-10) {
    const auto pairs = generalized_eigenpairs(a, b);
    double beta_scale = 0.0;
    for (const auto& p : pairs) beta_scale = std::max(beta_scale, std::abs(p.beta));
    std::vector<cplx> out;
    if (beta_scale <= 0.0) return out;
    for (const auto& p : pairs)
        if (std::abs(p.beta) >= beta_tol * beta_scale) out.push_back(p.alpha / p.beta);
    return out;
}

} // namespace toepspec

#endif
