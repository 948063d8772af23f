#include <catch2/catch.hpp>

#include "test_support.hpp"
#include "toepspec/bundled_examples.hpp"
#include "toepspec/classify.hpp"
#include "toepspec/hokalman.hpp"

using namespace toepspec;

TEST_CASE("double pole on the circle through the full realization path") {
    // 1/(z-1)^2: one pole of order two at 1.
    const RationalMatrix sym(
        1, {RationalScalar({cplx(1.0)}, {cplx(1.0), cplx(-2.0), cplx(1.0)})});
    const PartialFraction pf = partial_fractions(sym);
    REQUIRE(pf.terms.size() == 2);
    CHECK(pf.terms[0].order == 1);
    CHECK(pf.terms[1].order == 2);
    CHECK(std::abs(pf.terms[1].residue(0, 0) - cplx(1.0)) < 1e-6);
    CHECK(std::abs(pf.terms[0].residue(0, 0)) < 1e-6);

    const Realization r = split_and_realize(sym);
    CHECK(r.n_plus() == 0);
    REQUIRE(r.n_minus() == 2);
    CHECK(matching_distance(eigenvalues_of(r.alpha), {cplx(1.0), cplx(1.0)}) < 1e-6);

    // a_{-j} = gamma alpha^{j-1} beta = j - 1 + ... for the order-2 pole:
    // (z-1)^{-2} has Laurent coefficients binom(j-1, 1) = j-1.
    const auto minus = markov_minus(r, 6);
    for (int j = 1; j <= 6; ++j)
        CHECK(std::abs(minus[static_cast<size_t>(j - 1)](0, 0) -
                       cplx(static_cast<double>(j - 1))) < 1e-7);

    const GrowthReport rep = growth_bound_check(r, 24);
    CHECK(rep.M == 2);
    CHECK(rep.ok);
}

TEST_CASE("mixed inside, on-circle, and outside poles") {
    // 1/((z-0.5)(z-1)(z-2))
    const Coeffs den = poly_from_roots({cplx(0.5), cplx(1.0), cplx(2.0)});
    const RationalMatrix sym(1, {RationalScalar({cplx(1.0)}, den)});
    const PoleSet ps = classify_poles(partial_fractions(sym));
    CHECK(ps.inside.size() == 1);
    CHECK(ps.on_circle.size() == 1);
    CHECK(ps.outside.size() == 1);

    const Realization r = split_and_realize(sym);
    CHECK(r.n_plus() == 1);
    CHECK(r.n_minus() == 2);
    CHECK(matching_distance(eigenvalues_of(r.alpha), {cplx(0.5), cplx(1.0)}) < 1e-7);
    CHECK(matching_distance(eigenvalues_of(r.A), {cplx(0.5)}) < 1e-7);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> radius(0.2, 3.0), angle(0.0, 2.0 * kPi);
    int checked = 0;
    while (checked < 10) {
        const cplx z = std::polar(radius(rng), angle(rng));
        Mat a, b;
        try {
            a = eval_rational_matrix(sym, z);
            b = eval_realization(r, z);
        } catch (const PoleHitError&) {
            continue;
        }
        REQUIRE((a - b).norm() < 1e-8 * std::max(1.0, a.norm()));
        ++checked;
    }
}

TEST_CASE("factored denominators give exact pole models") {
    FactoredDen fd;
    fd.leading = cplx(1.0);
    fd.factors.push_back({cplx(1.0), 2});
    const Coeffs den{cplx(1.0), cplx(-2.0), cplx(1.0)};
    const RationalScalar entry({cplx(1.0)}, den, fd);
    REQUIRE(entry.poles().size() == 1);
    CHECK(entry.poles()[0].value == cplx(1.0));
    CHECK(entry.poles()[0].multiplicity == 2);
    const RationalMatrix sym(1, {entry});
    const PartialFraction pf = partial_fractions(sym);
    REQUIRE(pf.terms.size() == 2);
    CHECK(pf.terms[1].pole == cplx(1.0));
    CHECK(std::abs(pf.terms[1].residue(0, 0) - cplx(1.0)) < 1e-14);
}

TEST_CASE("nearly coincident factored poles are rejected as ill conditioned") {
    const cplx p1(0.3), p2(0.3 + 1e-13);
    FactoredDen fd;
    fd.factors.push_back({p1, 1});
    fd.factors.push_back({p2, 1});
    const Coeffs den = fd.expand();
    const RationalMatrix sym(1, {RationalScalar({cplx(1.0)}, den, fd, 1e-15)});
    CHECK_THROWS_AS(partial_fractions(sym, 1e-15), IllConditionedError);
}

TEST_CASE("two-point exceptional set") {
    // [[2, 1/(z-1)], [0, 3]]: det(Omega - lambda) = (2-lambda)(3-lambda).
    Realization r;
    r.R0 = Mat(2, 2);
    r.R0 << cplx(2.0), cplx(0.0), cplx(0.0), cplx(3.0);
    r.A = Mat(0, 0);
    r.B = Mat(0, 2);
    r.C = Mat(2, 0);
    r.alpha = Mat::Constant(1, 1, cplx(1.0));
    r.beta = Mat(1, 2);
    r.beta << cplx(0.0), cplx(1.0);
    r.gamma = Mat(2, 1);
    r.gamma << cplx(1.0), cplx(0.0);
    const auto e = compute_E(detL_coeffs(assemble_L(r)));
    REQUIRE(e.size() == 2);
    CHECK(matching_distance(e, {cplx(2.0), cplx(3.0)}) < 1e-8);

    const EssCloud cloud = ess_spectrum_sweep(r, 64);
    CHECK(cloud.whole_plane);
    REQUIRE(cloud.e_points.size() == 2);
}

TEST_CASE("empty minus part: the trivial Riccati test is exact") {
    // 1/(z-2): analytic on the closed disc, n+ = 1, n- = 0.
    const RationalMatrix sym(1, {RationalScalar({cplx(1.0)}, {cplx(-2.0), cplx(1.0)})});
    const Realization r = split_and_realize(sym);
    REQUIRE(r.n_plus() == 1);
    REQUIRE(r.n_minus() == 0);
    // The image of the unit circle is the circle |w + 2/3| = 1/3; its
    // interior is spectrum, its exterior resolvent.
    const RiccatiOutcome inside = solve_stabilizing({r, cplx(-2.0 / 3.0, 0.0)});
    CHECK(inside.verdict == Verdict::NotResolvent);
    const RiccatiOutcome outside = solve_stabilizing({r, cplx(0.5, 0.0)});
    REQUIRE(outside.verdict == Verdict::Resolvent);
    CHECK(outside.Q.rows() == 0);
    CHECK(outside.Q.cols() == 1);
    CHECK(outside.rho_A_circ < 1.0);
    const RiccatiOutcome far = solve_stabilizing({r, cplx(0.0, 2.0)});
    CHECK(far.verdict == Verdict::Resolvent);
}

TEST_CASE("rank ambiguity raises RankUndetermined") {
    // Second Hankel singular value lands inside the factor-10 band around
    // rank_tol * sigma_max.
    const double delta = 3e-9;
    std::vector<Mat> coeffs{Mat::Constant(1, 1, cplx(1.0)),
                            Mat::Constant(1, 1, cplx(0.5)),
                            Mat::Constant(1, 1, cplx(0.25 + delta))};
    CHECK_THROWS_AS(minimal_from_coeffs(coeffs, 1, 1e-9), RankUndeterminedError);
}

TEST_CASE("eval_realization rejects reciprocal eigenvalues of A") {
    Realization r;
    r.R0 = Mat::Zero(1, 1);
    r.A = Mat::Constant(1, 1, cplx(0.5));
    r.B = Mat::Constant(1, 1, cplx(1.0));
    r.C = Mat::Constant(1, 1, cplx(1.0));
    r.alpha = Mat(0, 0);
    r.beta = Mat(0, 1);
    r.gamma = Mat(1, 0);
    CHECK_THROWS_AS(eval_realization(r, cplx(2.0)), PoleHitError);
    CHECK(std::abs(eval_realization(r, cplx(0.5))(0, 0) - cplx(2.0 / 3.0)) < 1e-12);
}

TEST_CASE("hankel pair block structure") {
    const CoeffWindow cw = coeff_window(examples::realization(3), 5);
    const HankelPair hp = hankel_pair(cw, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            REQUIRE((hp.Hplus.block(i, j, 1, 1) - cw.a(i + j + 1)).norm() == 0.0);
            REQUIRE((hp.Hminus.block(i, j, 1, 1) - cw.a(-(i + j + 1))).norm() == 0.0);
        }
}

TEST_CASE("triple pole on the circle via a factored denominator") {
    // 1/(z-1)^3: root finding cannot separate a numerical triple root, so
    // the factored form carries the exact pole model.
    FactoredDen fd;
    fd.factors.push_back({cplx(1.0), 3});
    const Coeffs den = fd.expand();
    const RationalMatrix sym(1, {RationalScalar({cplx(1.0)}, den, fd)});

    const PartialFraction pf = partial_fractions(sym);
    REQUIRE(pf.terms.size() == 3);
    CHECK(std::abs(pf.terms[2].residue(0, 0) - cplx(1.0)) < 1e-12);

    const Realization r = split_and_realize(sym);
    CHECK(r.n_plus() == 0);
    REQUIRE(r.n_minus() == 3);

    // Laurent coefficients of (z-1)^{-3} are binom(j-1, 2).
    const auto minus = markov_minus(r, 8);
    for (int j = 1; j <= 8; ++j)
        CHECK(std::abs(minus[static_cast<size_t>(j - 1)](0, 0) -
                       cplx(binomial(j - 1, 2))) < 1e-6 * (1.0 + binomial(j - 1, 2)));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> radius(0.2, 2.5), angle(0.0, 2.0 * kPi);
    int checked = 0;
    while (checked < 10) {
        const cplx z = std::polar(radius(rng), angle(rng));
        if (std::abs(z - cplx(1.0)) < 0.2) continue;
        const Mat a = eval_rational_matrix(sym, z);
        const Mat b = eval_realization(r, z);
        REQUIRE((a - b).norm() < 1e-7 * std::max(1.0, a.norm()));
        ++checked;
    }
}

TEST_CASE("matrix symbol with coupled multiple poles") {
    // [[1/(z-1)^2, 1/(z-1)], [0, 1/(z+1)]]: local degree 2 at z = 1 plus a
    // simple pole at -1 gives n- = 3.
    FactoredDen fd2;
    fd2.factors.push_back({cplx(1.0), 2});
    const RationalMatrix sym(
        2, {RationalScalar({cplx(1.0)}, fd2.expand(), fd2),
            RationalScalar({cplx(1.0)}, {cplx(-1.0), cplx(1.0)}),
            RationalScalar({cplx(0.0)}, {cplx(1.0)}),
            RationalScalar({cplx(1.0)}, {cplx(1.0), cplx(1.0)})});
    const Realization r = split_and_realize(sym);
    CHECK(r.n_plus() == 0);
    REQUIRE(r.n_minus() == 3);
    CHECK(matching_distance(eigenvalues_of(r.alpha),
                            {cplx(1.0), cplx(1.0), cplx(-1.0)}) < 1e-6);

    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> radius(0.2, 2.5), angle(0.0, 2.0 * kPi);
    int checked = 0;
    while (checked < 10) {
        const cplx z = std::polar(radius(rng), angle(rng));
        if (std::abs(z - cplx(1.0)) < 0.2 || std::abs(z + cplx(1.0)) < 0.2) continue;
        const Mat a = eval_rational_matrix(sym, z);
        const Mat b = eval_realization(r, z);
        REQUIRE((a - b).norm() < 1e-7 * std::max(1.0, a.norm()));
        ++checked;
    }
}

TEST_CASE("validation rejects broken realizations") {
    Realization r = examples::realization(2);
    SECTION("unstable A") {
        r.A = Mat::Constant(1, 1, cplx(1.5));
        CHECK_THROWS_AS(validate_realization(r), NumericalError);
    }
    SECTION("alpha outside the closed disc") {
        r.alpha = Mat::Constant(1, 1, cplx(1.1));
        CHECK_THROWS_AS(validate_realization(r), NumericalError);
    }
    SECTION("non-minimal triple") {
        r.B = Mat::Zero(1, 1);
        CHECK_THROWS_AS(validate_realization(r), NumericalError);
    }
    SECTION("dimension mismatch") {
        r.beta = Mat::Zero(2, 1);
        CHECK_THROWS_AS(validate_realization(r), ParseError);
    }
}
