#ifndef TOEPSPEC_BUNDLED_EXAMPLES_HPP
#define TOEPSPEC_BUNDLED_EXAMPLES_HPP

#include "toepspec/realization.hpp"

namespace toepspec::examples {

/// The five bundled example symbols:
///   1: (z-(a+ib))/(z-1), one pole on the circle, n+ = 0
///   2: (z^2+1)/(z-1), polynomial part z+1, n+ = n- = 1
///   3: (z^3+3z+1)/(z^2-1), poles at +-1
///   4: 2x2 symbol [[1/(z-1), z/(z+1)], [z/(z-1), 1/(z+1)]], n+ = 0
///   5: 2x2 symbol [[2, 1/(z-1)], [0, 2]] with E(Omega) = {2}
inline RationalMatrix symbol(int id, double a = 0.5, double b = 0.5) {
    const Coeffs zm1{cplx(-1.0), cplx(1.0)}; // z - 1
    const Coeffs zp1{cplx(1.0), cplx(1.0)};  // z + 1
    const Coeffs one{cplx(1.0)};
    switch (id) {
        case 1:
            return RationalMatrix(1, {RationalScalar({cplx(-a, -b), cplx(1.0)}, zm1)});
        case 2:
            return RationalMatrix(
                1, {RationalScalar({cplx(1.0), cplx(0.0), cplx(1.0)}, zm1)});
        case 3:
            return RationalMatrix(
                1, {RationalScalar({cplx(1.0), cplx(3.0), cplx(0.0), cplx(1.0)},
                                   {cplx(-1.0), cplx(0.0), cplx(1.0)})});
        case 4:
            return RationalMatrix(2, {RationalScalar(one, zm1),
                                      RationalScalar({cplx(0.0), cplx(1.0)}, zp1),
                                      RationalScalar({cplx(0.0), cplx(1.0)}, zm1),
                                      RationalScalar(one, zp1)});
        case 5:
            return RationalMatrix(2, {RationalScalar({cplx(2.0)}, one),
                                      RationalScalar(one, zm1),
                                      RationalScalar({cplx(0.0)}, one),
                                      RationalScalar({cplx(2.0)}, one)});
        default:
            throw ParseError("bundled example id must be in 1..5");
    }
}

/// Explicit minimal realizations of the bundled symbols.
inline Realization realization(int id, double a = 0.5, double b = 0.5) {
    Realization r;
    switch (id) {
        case 1:
            r.R0 = Mat::Constant(1, 1, cplx(1.0));
            r.A = Mat(0, 0); r.B = Mat(0, 1); r.C = Mat(1, 0);
            r.alpha = Mat::Constant(1, 1, cplx(1.0));
            r.beta = Mat::Constant(1, 1, cplx(1.0 - a, -b));
            r.gamma = Mat::Constant(1, 1, cplx(1.0));
            return r;
        case 2:
            r.R0 = Mat::Constant(1, 1, cplx(1.0));
            r.A = Mat::Zero(1, 1);
            r.B = Mat::Constant(1, 1, cplx(1.0));
            r.C = Mat::Constant(1, 1, cplx(1.0));
            r.alpha = Mat::Constant(1, 1, cplx(1.0));
            r.beta = Mat::Constant(1, 1, cplx(2.0));
            r.gamma = Mat::Constant(1, 1, cplx(1.0));
            return r;
        case 3:
            r.R0 = Mat::Zero(1, 1);
            r.A = Mat::Zero(1, 1);
            r.B = Mat::Constant(1, 1, cplx(1.0));
            r.C = Mat::Constant(1, 1, cplx(1.0));
            r.alpha = Mat(2, 2);
            r.alpha << cplx(1.0), cplx(0.0), cplx(0.0), cplx(-1.0);
            r.beta = Mat(2, 1);
            r.beta << cplx(1.0), cplx(1.0);
            r.gamma = Mat(1, 2);
            r.gamma << cplx(2.5), cplx(1.5);
            return r;
        case 4:
            r.R0 = Mat(2, 2);
            r.R0 << cplx(0.0), cplx(1.0), cplx(1.0), cplx(0.0);
            r.A = Mat(0, 0); r.B = Mat(0, 2); r.C = Mat(2, 0);
            r.alpha = Mat(2, 2);
            r.alpha << cplx(1.0), cplx(0.0), cplx(0.0), cplx(-1.0);
            r.beta = Mat::Identity(2, 2);
            r.gamma = Mat(2, 2);
            r.gamma << cplx(1.0), cplx(-1.0), cplx(1.0), cplx(1.0);
            return r;
        case 5:
            r.R0 = 2.0 * Mat::Identity(2, 2);
            r.A = Mat(0, 0); r.B = Mat(0, 2); r.C = Mat(2, 0);
            r.alpha = Mat::Constant(1, 1, cplx(1.0));
            r.beta = Mat(1, 2);
            r.beta << cplx(0.0), cplx(1.0);
            r.gamma = Mat(2, 1);
            r.gamma << cplx(1.0), cplx(0.0);
            return r;
        default:
            throw ParseError("bundled example id must be in 1..5");
    }
}

} // namespace toepspec::examples

#endif
