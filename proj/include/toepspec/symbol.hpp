#ifndef TOEPSPEC_SYMBOL_HPP
#define TOEPSPEC_SYMBOL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "toepspec/polynomial.hpp"

namespace toepspec {

/// Factored form of a denominator: leading * prod (z - pole)^multiplicity.
struct FactoredDen {
    cplx leading = cplx(1.0);
    std::vector<RootCluster> factors;

    Coeffs expand() const {
        Coeffs p{leading};
        for (const RootCluster& f : factors)
            for (int i = 0; i < f.multiplicity; ++i)
                p = poly_mul(p, Coeffs{-f.value, cplx(1.0)});
        return p;
    }
};

/// One scalar rational function num(z)/den(z), coefficients in ascending
/// powers. Construction validates that den is not identically zero, that
/// num and den share no root within the clustering tolerance, and that a
/// factored denominator (when given) expands to den.
class RationalScalar {
public:
    RationalScalar() : num_{cplx(0.0)}, den_{cplx(1.0)} {}

    RationalScalar(Coeffs num, Coeffs den,
                   std::optional<FactoredDen> den_factored = std::nullopt,
                   double cluster_tol = 1e-7)
        : num_(trimmed(std::move(num))), den_(trimmed(std::move(den))),
          den_factored_(std::move(den_factored)) {
        if (poly_degree(den_) < 0)
            throw ParseError("RationalScalar: denominator is the zero polynomial");
        if (den_factored_) {
            const Coeffs expanded = den_factored_->expand();
            const Coeffs diff = poly_sub(expanded, den_);
            if (coeff_scale(diff) > 1e-10 * std::max(coeff_scale(den_), 1.0))
                throw ParseError("RationalScalar: den_factored does not expand to den");
            poles_ = den_factored_->factors;
        } else {
            poles_ = cluster_roots(poly_roots(den_), cluster_tol);
        }
        if (poly_degree(num_) >= 1 || std::abs(num_[0]) > 0.0) {
            for (const cplx& r : poly_roots(num_))
                for (const RootCluster& p : poles_) {
                    const double scale = std::max({1.0, std::abs(r), std::abs(p.value)});
                    if (std::abs(r - p.value) <= cluster_tol * scale)
                        throw ParseError("RationalScalar: num and den share a root; "
                                         "cancel the common factor first");
                }
        }
    }

    const Coeffs& num() const { return num_; }
    const Coeffs& den() const { return den_; }
    const std::optional<FactoredDen>& den_factored() const { return den_factored_; }
    const std::vector<RootCluster>& poles() const { return poles_; }

    cplx eval(cplx z) const { return poly_eval(num_, z) / poly_eval(den_, z); }

    double distance_to_pole(cplx z) const {
        double d = std::numeric_limits<double>::infinity();
        for (const RootCluster& p : poles_) d = std::min(d, std::abs(z - p.value));
        return d;
    }

private:
    Coeffs num_, den_;
    std::optional<FactoredDen> den_factored_;
    std::vector<RootCluster> poles_;
};

/// Square m x m grid of rational scalars, stored row-major.
struct RationalMatrix {
    int m = 0;
    std::vector<RationalScalar> entries;

    RationalMatrix() = default;
    RationalMatrix(int size, std::vector<RationalScalar> items)
        : m(size), entries(std::move(items)) {
        if (m <= 0 || entries.size() != static_cast<size_t>(m) * static_cast<size_t>(m))
            throw ParseError("RationalMatrix: entries must form a square m x m grid");
    }

    const RationalScalar& at(int i, int j) const {
        return entries[static_cast<size_t>(i) * static_cast<size_t>(m) +
                       static_cast<size_t>(j)];
    }
};

/// Entrywise evaluation num(z)/den(z). Rejects z within 1e-12 of any pole.
inline Mat eval_rational_matrix(const RationalMatrix& sym, cplx z) {
    for (const RationalScalar& e : sym.entries)
        if (e.distance_to_pole(z) <= 1e-12)
            throw PoleHitError("eval_rational_matrix: z is within 1e-12 of a pole");
    Mat out(sym.m, sym.m);
    for (int i = 0; i < sym.m; ++i)
        for (int j = 0; j < sym.m; ++j) out(i, j) = sym.at(i, j).eval(z);
    return out;
}

/// One term R * (z - pole)^{-order} of a matrix partial fraction expansion.
struct PartialTerm {
    cplx pole;
    int order = 1;
    Mat residue;
};

/// Matrix partial fraction form: polynomial part (ascending matrix
/// coefficients) plus a flat list of (pole, order, residue) terms, grouped
/// by pole with orders 1..k consecutive.
struct PartialFraction {
    int m = 0;
    std::vector<Mat> poly_part;
    std::vector<PartialTerm> terms;

    Mat eval(cplx z) const {
        Mat out = Mat::Zero(m, m);
        cplx zp(1.0);
        for (const Mat& c : poly_part) {
            out += zp * c;
            zp *= z;
        }
        for (const PartialTerm& t : terms)
            out += t.residue / std::pow(z - t.pole, t.order);
        return out;
    }

    /// Distinct poles with their total order (max order over terms).
    std::vector<RootCluster> pole_list() const {
        std::vector<RootCluster> out;
        for (const PartialTerm& t : terms) {
            bool found = false;
            for (RootCluster& p : out)
                if (p.value == t.pole) {
                    p.multiplicity = std::max(p.multiplicity, t.order);
                    found = true;
                }
            if (!found) out.push_back({t.pole, t.order});
        }
        return out;
    }
};

namespace detail {

struct ScalarTerm {
    cplx pole;
    int order;
    cplx coeff;
};

// Partial fractions of one entry. Poles are taken from the entry's
// (possibly factored) pole model; coefficients for a pole p of
// multiplicity k come from the series expansion of r(z)/g(z) around p,
// where den = lead * g * (z-p)^k.
inline std::pair<Coeffs, std::vector<ScalarTerm>>
scalar_partial_fractions(const RationalScalar& e, double cond_limit) {
    auto [q, r] = poly_divmod(e.num(), e.den());
    std::vector<ScalarTerm> terms;
    if (is_zero_poly(r)) return {q, terms};
    cplx lead = e.den().back();
    if (e.den_factored()) lead = e.den_factored()->leading;
    for (const RootCluster& p : e.poles()) {
        // g = den/(z-p)^k rebuilt from the clustered pole model.
        Coeffs g{lead};
        for (const RootCluster& other : e.poles()) {
            if (&other == &p) continue;
            for (int i = 0; i < other.multiplicity; ++i)
                g = poly_mul(g, Coeffs{-other.value, cplx(1.0)});
        }
        const Coeffs r_at = taylor_shift(r, p.value);
        const Coeffs g_at = taylor_shift(g, p.value);
        const Coeffs series =
            series_divide(r_at, g_at, static_cast<size_t>(p.multiplicity), cond_limit);
        for (int l = 1; l <= p.multiplicity; ++l) {
            const cplx c = series[static_cast<size_t>(p.multiplicity - l)];
            terms.push_back({p.value, l, c});
        }
    }
    return {q, terms};
}

} // namespace detail

/// Matrix partial fraction decomposition. Poles from all entries are merged
/// by clustering, so coinciding poles of different entries share one term
/// group with matrix residues.
inline PartialFraction partial_fractions(const RationalMatrix& sym,
                                         double cluster_tol = 1e-7,
                                         double cond_limit = 1e12) {
    const int m = sym.m;
    PartialFraction pf;
    pf.m = m;

    struct EntryData {
        Coeffs poly;
        std::vector<detail::ScalarTerm> terms;
    };
    std::vector<EntryData> data(static_cast<size_t>(m) * static_cast<size_t>(m));
    size_t max_poly = 1;
    std::vector<cplx> all_poles;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            auto& d = data[static_cast<size_t>(i * m + j)];
            std::tie(d.poly, d.terms) =
                detail::scalar_partial_fractions(sym.at(i, j), cond_limit);
            max_poly = std::max(max_poly, d.poly.size());
            for (const auto& t : d.terms)
                if (t.order == 1) all_poles.push_back(t.pole);
        }

    pf.poly_part.assign(max_poly, Mat::Zero(m, m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const auto& d = data[static_cast<size_t>(i * m + j)];
            for (size_t k = 0; k < d.poly.size(); ++k) pf.poly_part[k](i, j) = d.poly[k];
        }
    while (pf.poly_part.size() > 1 && pf.poly_part.back().norm() == 0.0)
        pf.poly_part.pop_back();

    // Cross-entry pole merge.
    const std::vector<RootCluster> groups = cluster_roots(all_poles, cluster_tol);
    for (const RootCluster& g : groups) {
        int order = 0;
        for (const auto& d : data)
            for (const auto& t : d.terms) {
                const double scale = std::max({1.0, std::abs(t.pole), std::abs(g.value)});
                if (std::abs(t.pole - g.value) <= cluster_tol * scale)
                    order = std::max(order, t.order);
            }
        for (int l = 1; l <= order; ++l) {
            Mat res = Mat::Zero(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (const auto& t : data[static_cast<size_t>(i * m + j)].terms) {
                        const double scale =
                            std::max({1.0, std::abs(t.pole), std::abs(g.value)});
                        if (t.order == l &&
                            std::abs(t.pole - g.value) <= cluster_tol * scale)
                            res(i, j) += t.coeff;
                    }
            pf.terms.push_back({g.value, l, res});
        }
    }
    return pf;
}

/// Poles partitioned by modulus relative to the unit circle.
struct PoleSet {
    std::vector<RootCluster> inside;
    std::vector<RootCluster> on_circle;
    std::vector<RootCluster> outside;
    double eps_circle = 1e-9;
};

/// Partition the poles of a partial fraction by modulus with a snap band:
/// | |p| - 1 | <= eps_circle counts as on the circle. Moduli are not
/// rescaled; only the membership changes.
inline PoleSet classify_poles(const PartialFraction& pf, double eps_circle = 1e-9) {
    PoleSet ps;
    ps.eps_circle = eps_circle;
    for (const RootCluster& p : pf.pole_list()) {
        const double r = std::abs(p.value);
        if (std::abs(r - 1.0) <= eps_circle) ps.on_circle.push_back(p);
        else if (r < 1.0) ps.inside.push_back(p);
        else ps.outside.push_back(p);
    }
    return ps;
}

} // namespace toepspec

#endif
