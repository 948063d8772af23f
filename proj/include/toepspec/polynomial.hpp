#ifndef TOEPSPEC_POLYNOMIAL_HPP
#define TOEPSPEC_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "toepspec/linalg.hpp"

namespace toepspec {

/// Dense complex polynomial, coefficients in ascending powers.
using Coeffs = std::vector<cplx>;

inline double coeff_scale(const Coeffs& p) {
    double s = 0.0;
    for (const cplx& c : p) s = std::max(s, std::abs(c));
    return s;
}

/// Drop trailing coefficients below rel * max|coeff|.
inline Coeffs trimmed(Coeffs p, double rel = 1e-13) {
    const double cut = rel * coeff_scale(p);
    while (p.size() > 1 && std::abs(p.back()) <= cut) p.pop_back();
    if (p.empty()) p.push_back(cplx(0.0));
    return p;
}

inline bool is_zero_poly(const Coeffs& p, double rel = 1e-13) {
    const Coeffs t = trimmed(p, rel);
    return t.size() == 1 && std::abs(t[0]) == 0.0;
}

/// Degree after trimming; -1 for the zero polynomial.
inline int poly_degree(const Coeffs& p) {
    Coeffs t = trimmed(p);
    if (t.size() == 1 && t[0] == cplx(0.0)) return -1;
    return static_cast<int>(t.size()) - 1;
}

inline cplx poly_eval(const Coeffs& p, cplx z) {
    cplx acc(0.0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
    return acc;
}

inline Coeffs poly_add(const Coeffs& a, const Coeffs& b) {
    Coeffs out(std::max(a.size(), b.size()), cplx(0.0));
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

inline Coeffs poly_sub(const Coeffs& a, const Coeffs& b) {
    Coeffs out(std::max(a.size(), b.size()), cplx(0.0));
    for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

inline Coeffs poly_mul(const Coeffs& a, const Coeffs& b) {
    Coeffs out(a.size() + b.size() - 1, cplx(0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline Coeffs poly_scale(Coeffs a, cplx s) {
    for (cplx& c : a) c *= s;
    return a;
}

/// Long division: num = q*den + r with deg r < deg den.
inline std::pair<Coeffs, Coeffs> poly_divmod(const Coeffs& num, const Coeffs& den_in) {
    Coeffs den = trimmed(den_in);
    if (poly_degree(den) < 0) throw Error("poly_divmod: division by zero polynomial");
    Coeffs r = trimmed(num);
    const int dd = static_cast<int>(den.size()) - 1;
    int dr = static_cast<int>(r.size()) - 1;
    if (dr < dd) return {Coeffs{cplx(0.0)}, r};
    Coeffs q(static_cast<size_t>(dr - dd + 1), cplx(0.0));
    const cplx lead = den.back();
    for (int k = dr - dd; k >= 0; --k) {
        cplx f = r[static_cast<size_t>(k + dd)] / lead;
        q[static_cast<size_t>(k)] = f;
        for (int i = 0; i <= dd; ++i)
            r[static_cast<size_t>(k + i)] -= f * den[static_cast<size_t>(i)];
    }
    r.resize(static_cast<size_t>(std::max(dd, 1)));
    return {trimmed(q), trimmed(r)};
}

inline Coeffs poly_derivative(const Coeffs& p) {
    if (p.size() <= 1) return Coeffs{cplx(0.0)};
    Coeffs out(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * static_cast<double>(i);
    return out;
}

/// Coefficients of p(c + u) as a polynomial in u (repeated synthetic division).
inline Coeffs taylor_shift(const Coeffs& p, cplx c) {
    Coeffs work = p;
    Coeffs out(p.size(), cplx(0.0));
    for (size_t k = 0; k < out.size(); ++k) {
        // Synthetic division of work by (u - 0) around c: remainder is work(c).
        cplx rem(0.0);
        for (size_t i = work.size(); i-- > 0;) {
            cplx next = work[i] + rem * c;
            rem = next;
            work[i] = next;
        }
        out[k] = work[0];
        work.erase(work.begin());
        if (work.empty()) break;
    }
    return out;
}

/// First nterms coefficients of num/den as a power series; den[0] must be
/// nonzero relative to the coefficient scale.
inline Coeffs series_divide(const Coeffs& num, const Coeffs& den, size_t nterms,
                            double cond_limit = 1e12) {
    if (den.empty()) throw Error("series_divide: empty denominator");
    const double scale = std::max(coeff_scale(den), 1e-300);
    if (std::abs(den[0]) * cond_limit < scale)
        throw IllConditionedError("series_divide: denominator nearly vanishes at expansion point");
    Coeffs t(nterms, cplx(0.0));
    for (size_t s = 0; s < nterms; ++s) {
        cplx acc = s < num.size() ? num[s] : cplx(0.0);
        for (size_t i = 0; i < s; ++i) {
            const size_t j = s - i;
            if (j < den.size()) acc -= t[i] * den[j];
        }
        t[s] = acc / den[0];
    }
    return t;
}

inline Coeffs poly_from_roots(const std::vector<cplx>& roots, cplx leading = cplx(1.0)) {
    Coeffs p{leading};
    for (const cplx& r : roots) p = poly_mul(p, Coeffs{-r, cplx(1.0)});
    return p;
}

namespace detail {

// Parlett-Reinsch style balancing on entry magnitudes; exact powers of two
// so roots are unchanged.
inline void balance_companion(Mat& c) {
    const Index n = c.rows();
    Mat off = c;
    off.diagonal().setZero();
    bool changed = true;
    int guard = 0;
    while (changed && guard++ < 100) {
        changed = false;
        for (Index i = 0; i < n; ++i) {
            double row_norm = off.row(i).cwiseAbs().sum();
            double col_norm = off.col(i).cwiseAbs().sum();
            if (row_norm == 0.0 || col_norm == 0.0) continue;
            int exponent = 0;
            std::frexp(row_norm / col_norm, &exponent);
            exponent /= 2;
            if (exponent != 0) {
                const double sc = std::ldexp(col_norm, exponent);
                const double sr = std::ldexp(row_norm, -exponent);
                if (sc + sr < 0.9 * (col_norm + row_norm)) {
                    changed = true;
                    off.row(i) *= std::ldexp(1.0, -exponent);
                    off.col(i) *= std::ldexp(1.0, exponent);
                }
            }
        }
    }
    off.diagonal() = c.diagonal();
    c = off;
}

} // namespace detail

/// All roots of a complex polynomial via the balanced companion matrix.
/// Constant polynomials have no roots.
inline std::vector<cplx> poly_roots(const Coeffs& p_in) {
    Coeffs p = trimmed(p_in);
    const int deg = poly_degree(p);
    if (deg <= 0) return {};
    if (deg == 1) return {-p[0] / p[1]};
    if (deg == 2) {
        const cplx a = p[2], b = p[1], c = p[0];
        const cplx disc = std::sqrt(b * b - 4.0 * a * c);
        // Pick the sign that avoids cancellation in the larger root.
        const cplx q = (std::abs(b + disc) > std::abs(b - disc)) ? -(b + disc) / 2.0
                                                                 : -(b - disc) / 2.0;
        std::vector<cplx> roots;
        roots.push_back(q / a);
        roots.push_back(std::abs(q) > 0.0 ? c / q : -b / a - q / a);
        return roots;
    }
    Mat comp = Mat::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = cplx(1.0);
    for (int i = 0; i < deg; ++i)
        comp(i, deg - 1) = -p[static_cast<size_t>(i)] / p[static_cast<size_t>(deg)];
    detail::balance_companion(comp);
    return eigenvalues_of(comp);
}

struct RootCluster {
    cplx value;
    int multiplicity = 0;
};

/// Single-linkage clustering of roots with relative tolerance; the cluster
/// value is the mean, which is more accurate than any member for a true
/// multiple root.
inline std::vector<RootCluster> cluster_roots(const std::vector<cplx>& roots,
                                              double rel_tol) {
    const size_t n = roots.size();
    std::vector<int> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double scale = std::max({1.0, std::abs(roots[i]), std::abs(roots[j])});
            if (std::abs(roots[i] - roots[j]) <= rel_tol * scale)
                parent[static_cast<size_t>(find(static_cast<int>(i)))] =
                    find(static_cast<int>(j));
        }
    std::vector<RootCluster> clusters;
    std::vector<int> cluster_of(n, -1);
    for (size_t i = 0; i < n; ++i) {
        const int root = find(static_cast<int>(i));
        if (cluster_of[static_cast<size_t>(root)] < 0) {
            cluster_of[static_cast<size_t>(root)] = static_cast<int>(clusters.size());
            clusters.push_back({cplx(0.0), 0});
        }
        RootCluster& cl = clusters[static_cast<size_t>(cluster_of[static_cast<size_t>(root)])];
        cl.value += roots[i];
        cl.multiplicity += 1;
    }
    for (RootCluster& cl : clusters) cl.value /= static_cast<double>(cl.multiplicity);
    std::sort(clusters.begin(), clusters.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return clusters;
}

} // namespace toepspec

#endif
