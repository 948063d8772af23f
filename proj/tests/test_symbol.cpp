#include <catch2/catch.hpp>

#include <random>

#include "toepspec/bundled_examples.hpp"
#include "toepspec/symbol.hpp"

using namespace toepspec;

namespace {

// Reconstruction oracle: the partial fraction form must reproduce the
// symbol at sample points away from the poles.
void check_reconstruction(const RationalMatrix& sym, const PartialFraction& pf) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> radius(0.3, 2.8), angle(0.0, 2.0 * kPi);
    int done = 0;
    while (done < 20) {
        const cplx z = std::polar(radius(rng), angle(rng));
        bool near = false;
        for (const PartialTerm& t : pf.terms)
            if (std::abs(z - t.pole) < 0.05) near = true;
        if (near) continue;
        Mat ref;
        try {
            ref = eval_rational_matrix(sym, z);
        } catch (const PoleHitError&) {
            continue;
        }
        const Mat got = pf.eval(z);
        REQUIRE((ref - got).norm() <= 1e-8 * std::max(1.0, ref.norm()));
        ++done;
    }
}

} // namespace

TEST_CASE("eval_rational_matrix on the bundled symbols") {
    SECTION("example 1 at the origin") {
        const RationalMatrix sym = examples::symbol(1, 0.5, 0.5);
        const Mat v = eval_rational_matrix(sym, cplx(0.0));
        CHECK(std::abs(v(0, 0) - cplx(0.5, 0.5)) < 1e-14);
    }
    SECTION("example 4 at the origin") {
        const Mat v = eval_rational_matrix(examples::symbol(4), cplx(0.0));
        Mat want(2, 2);
        want << cplx(-1.0), cplx(0.0), cplx(0.0), cplx(1.0);
        CHECK((v - want).norm() < 1e-14);
    }
    SECTION("denominator root raises PoleHit") {
        CHECK_THROWS_AS(eval_rational_matrix(examples::symbol(1), cplx(1.0)),
                        PoleHitError);
        CHECK_THROWS_AS(eval_rational_matrix(examples::symbol(4), cplx(-1.0)),
                        PoleHitError);
    }
}

TEST_CASE("rational scalar validation") {
    SECTION("zero denominator is rejected") {
        CHECK_THROWS_AS(RationalScalar({cplx(1.0)}, {cplx(0.0)}), ParseError);
    }
    SECTION("shared root is rejected") {
        // (z-1)/(z-1)
        CHECK_THROWS_AS(RationalScalar({cplx(-1.0), cplx(1.0)}, {cplx(-1.0), cplx(1.0)}),
                        ParseError);
    }
    SECTION("den_factored must expand to den") {
        FactoredDen fd;
        fd.factors.push_back({cplx(2.0), 1});
        CHECK_THROWS_AS(RationalScalar({cplx(1.0)}, {cplx(-1.0), cplx(1.0)}, fd),
                        ParseError);
        FactoredDen good;
        good.factors.push_back({cplx(1.0), 1});
        const RationalScalar ok({cplx(2.0)}, {cplx(-1.0), cplx(1.0)}, good);
        REQUIRE(ok.poles().size() == 1);
        CHECK(ok.poles()[0].value == cplx(1.0));
    }
}

TEST_CASE("partial fractions of the bundled scalar symbols") {
    SECTION("example 2: z + 1 + 2/(z-1)") {
        const PartialFraction pf = partial_fractions(examples::symbol(2));
        REQUIRE(pf.poly_part.size() == 2);
        CHECK(std::abs(pf.poly_part[0](0, 0) - cplx(1.0)) < 1e-12);
        CHECK(std::abs(pf.poly_part[1](0, 0) - cplx(1.0)) < 1e-12);
        REQUIRE(pf.terms.size() == 1);
        CHECK(pf.terms[0].order == 1);
        CHECK(std::abs(pf.terms[0].pole - cplx(1.0)) < 1e-12);
        CHECK(std::abs(pf.terms[0].residue(0, 0) - cplx(2.0)) < 1e-12);
        check_reconstruction(examples::symbol(2), pf);
    }
    SECTION("example 3: z + (5/2)/(z-1) + (3/2)/(z+1)") {
        const PartialFraction pf = partial_fractions(examples::symbol(3));
        REQUIRE(pf.poly_part.size() == 2);
        CHECK(std::abs(pf.poly_part[0](0, 0)) < 1e-12);
        CHECK(std::abs(pf.poly_part[1](0, 0) - cplx(1.0)) < 1e-12);
        REQUIRE(pf.terms.size() == 2);
        double res_at_1 = 0.0, res_at_m1 = 0.0;
        for (const PartialTerm& t : pf.terms) {
            if (std::abs(t.pole - cplx(1.0)) < 1e-9) res_at_1 = t.residue(0, 0).real();
            if (std::abs(t.pole + cplx(1.0)) < 1e-9) res_at_m1 = t.residue(0, 0).real();
        }
        CHECK(res_at_1 == Approx(2.5).margin(1e-10));
        CHECK(res_at_m1 == Approx(1.5).margin(1e-10));
        check_reconstruction(examples::symbol(3), pf);
    }
    SECTION("constant symbol has no terms") {
        const RationalMatrix sym(1, {RationalScalar({cplx(3.0, -1.0)}, {cplx(1.0)})});
        const PartialFraction pf = partial_fractions(sym);
        REQUIRE(pf.poly_part.size() == 1);
        CHECK(std::abs(pf.poly_part[0](0, 0) - cplx(3.0, -1.0)) < 1e-14);
        CHECK(pf.terms.empty());
    }
}

TEST_CASE("partial fractions with higher-order and matrix poles") {
    SECTION("double pole") {
        // (2z+1)/((z-0.5)^2 (z+2))
        const Coeffs den = poly_mul(poly_from_roots({cplx(0.5), cplx(0.5)}),
                                    Coeffs{cplx(2.0), cplx(1.0)});
        const RationalMatrix sym(1, {RationalScalar({cplx(1.0), cplx(2.0)}, den)});
        const PartialFraction pf = partial_fractions(sym);
        REQUIRE(pf.terms.size() == 3);
        check_reconstruction(sym, pf);
    }
    SECTION("example 4 merges poles across entries") {
        const PartialFraction pf = partial_fractions(examples::symbol(4));
        REQUIRE(pf.terms.size() == 2);
        Mat res_1, res_m1;
        for (const PartialTerm& t : pf.terms) {
            if (std::abs(t.pole - cplx(1.0)) < 1e-9) res_1 = t.residue;
            if (std::abs(t.pole + cplx(1.0)) < 1e-9) res_m1 = t.residue;
        }
        Mat want_1(2, 2), want_m1(2, 2);
        want_1 << cplx(1.0), cplx(0.0), cplx(1.0), cplx(0.0);
        want_m1 << cplx(0.0), cplx(-1.0), cplx(0.0), cplx(1.0);
        CHECK((res_1 - want_1).norm() < 1e-12);
        CHECK((res_m1 - want_m1).norm() < 1e-12);
        // The polynomial parts of z/(z+1) and z/(z-1) are both 1.
        REQUIRE(pf.poly_part.size() == 1);
        Mat want_p0(2, 2);
        want_p0 << cplx(0.0), cplx(1.0), cplx(1.0), cplx(0.0);
        CHECK((pf.poly_part[0] - want_p0).norm() < 1e-12);
        check_reconstruction(examples::symbol(4), pf);
    }
}

TEST_CASE("classify_poles") {
    SECTION("example 3 poles are on the circle") {
        const PoleSet ps = classify_poles(partial_fractions(examples::symbol(3)), 1e-9);
        CHECK(ps.inside.empty());
        CHECK(ps.outside.empty());
        REQUIRE(ps.on_circle.size() == 2);
    }
    SECTION("modulus comparison") {
        PartialFraction pf;
        pf.m = 1;
        pf.poly_part = {Mat::Zero(1, 1)};
        pf.terms.push_back({cplx(0.5), 1, Mat::Ones(1, 1)});
        pf.terms.push_back({cplx(2.0), 1, Mat::Ones(1, 1)});
        const PoleSet ps = classify_poles(pf, 1e-9);
        REQUIRE(ps.inside.size() == 1);
        REQUIRE(ps.outside.size() == 1);
        CHECK(ps.on_circle.empty());
        CHECK(std::abs(ps.inside[0].value - cplx(0.5)) < 1e-15);
        CHECK(std::abs(ps.outside[0].value - cplx(2.0)) < 1e-15);
    }
    SECTION("snap band pulls near-circle poles on") {
        PartialFraction pf;
        pf.m = 1;
        pf.poly_part = {Mat::Zero(1, 1)};
        pf.terms.push_back({cplx(1.0 + 1e-12), 1, Mat::Ones(1, 1)});
        const PoleSet ps = classify_poles(pf, 1e-9);
        CHECK(ps.on_circle.size() == 1);
        CHECK(ps.inside.empty());
        CHECK(ps.outside.empty());
    }
}
