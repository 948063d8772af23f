#include <catch2/catch.hpp>

#include <random>

#include "test_support.hpp"
#include "toepspec/bundled_examples.hpp"
#include "toepspec/riccati.hpp"

using namespace toepspec;

TEST_CASE("riccati_residual") {
    const Realization r2 = examples::realization(2);
    SECTION("example 2 at lambda = -2.5: Q = 0.5 solves the equation") {
        const auto [res, d] = riccati_residual({r2, cplx(-2.5)},
                                               Mat::Constant(1, 1, cplx(0.5)));
        CHECK(res.norm() < 1e-14);
        CHECK(std::abs(d(0, 0) - cplx(3.0)) < 1e-14); // 1 - 0.5 + 2.5
    }
    SECTION("example 2 at lambda = -2.5: Q = 0 has residual -2/3.5") {
        const auto [res, d] = riccati_residual({r2, cplx(-2.5)}, Mat::Zero(1, 1));
        CHECK(std::abs(res(0, 0) - cplx(-2.0 / 3.5)) < 1e-14);
    }
    SECTION("empty plus part: residual is the empty matrix") {
        const Realization r4 = examples::realization(4);
        const auto [res, d] = riccati_residual({r4, cplx(0.5, 0.5)}, Mat(2, 0));
        CHECK(res.rows() == 2);
        CHECK(res.cols() == 0);
        const Mat want = r4.R0 - cplx(0.5, 0.5) * Mat::Identity(2, 2);
        CHECK((d - want).norm() < 1e-15);
    }
    SECTION("singular D is rejected") {
        const Realization r4 = examples::realization(4);
        // lambda = 1 is an eigenvalue of R0.
        CHECK_THROWS_AS(riccati_residual({r4, cplx(1.0)}, Mat(2, 0)), DSingularError);
    }
}

TEST_CASE("solve_stabilizing on the bundled examples") {
    SECTION("example 2 at lambda = -2.5") {
        const RiccatiOutcome out =
            solve_stabilizing({examples::realization(2), cplx(-2.5)});
        REQUIRE(out.verdict == Verdict::Resolvent);
        CHECK(std::abs(out.Q(0, 0) - cplx(0.5)) < 1e-8);
        CHECK(std::abs(out.A_circ(0, 0) - cplx(-1.0 / 3.0)) < 1e-8);
        CHECK(std::abs(out.alpha_circ(0, 0) - cplx(0.5)) < 1e-8);
        CHECK(out.residual < 1e-9);
    }
    SECTION("example 5 at lambda = 2 hits E(Omega)") {
        const RiccatiOutcome out =
            solve_stabilizing({examples::realization(5), cplx(2.0)});
        CHECK(out.verdict == Verdict::NotResolvent);
        CHECK(out.certificate == "in-E(Omega)");
    }
    SECTION("example 3 at lambda = -0.1 + 1.8i is resolvent") {
        const RiccatiOutcome out =
            solve_stabilizing({examples::realization(3), cplx(-0.1, 1.8)});
        REQUIRE(out.verdict == Verdict::Resolvent);
        // alpha_circ must match the closed form with spectral radius 0.9572.
        CHECK(out.rho_alpha_circ == Approx(0.9572).margin(1e-3));
        Mat want(2, 2);
        want << cplx(0.75, -0.75), cplx(-0.15, -0.45),
                cplx(0.25, -0.75), cplx(-0.85, -0.45);
        CHECK((out.alpha_circ - want).norm() < 1e-7);
    }
    SECTION("example 3 at lambda = -1 is certified spectrum") {
        const RiccatiOutcome out =
            solve_stabilizing({examples::realization(3), cplx(-1.0)});
        CHECK(out.verdict == Verdict::NotResolvent);
        CHECK(out.certificate == "nonzero-index");
    }
    SECTION("example 2 on the essential spectrum curve") {
        // omega(i) = 0 lies on the curve.
        const RiccatiOutcome out =
            solve_stabilizing({examples::realization(2), cplx(0.0)});
        CHECK(out.verdict == Verdict::NotResolvent);
        CHECK(out.certificate == "in-essential-spectrum");
    }
}

TEST_CASE("is_resolvent_alpha_only") {
    SECTION("example 1 with a = 2, b = 0 at lambda = 0 is spectrum") {
        const Realization r = examples::realization(1, 2.0, 0.0);
        const auto [ok, alpha_circ] = is_resolvent_alpha_only(r, cplx(0.0));
        CHECK(!ok);
        // alpha_circ = 1 - (1-2)/(1-0) = 2.
        REQUIRE(alpha_circ.rows() == 1);
        CHECK(std::abs(alpha_circ(0, 0) - cplx(2.0)) < 1e-14);
    }
    SECTION("example 4: sampled lambda grid is never resolvent") {
        const Realization r = examples::realization(4);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (int trial = 0; trial < 60; ++trial) {
            const cplx lam(u(rng), u(rng));
            const auto [ok, alpha_circ] = is_resolvent_alpha_only(r, lam);
            REQUIRE(!ok);
        }
    }
    SECTION("constant symbol: resolvent off the eigenvalues of R0") {
        Realization r;
        r.R0 = Mat::Zero(1, 1);
        r.A = Mat(0, 0); r.B = Mat(0, 1); r.C = Mat(1, 0);
        r.alpha = Mat(0, 0); r.beta = Mat(0, 1); r.gamma = Mat(1, 0);
        CHECK(is_resolvent_alpha_only(r, cplx(0.7)).first);
        CHECK(!is_resolvent_alpha_only(r, cplx(0.0)).first);
    }
    SECTION("requires an empty plus part") {
        CHECK_THROWS_AS(is_resolvent_alpha_only(examples::realization(2), cplx(0.0)),
                        ParseError);
    }
}

TEST_CASE("alpha-only path agrees with the general solver") {
    const Realization r1 = examples::realization(1, 0.5, 0.5);
    const Realization r4 = examples::realization(4);
    RiccatiContext ctx1 = RiccatiContext::build(r1);
    RiccatiContext ctx4 = RiccatiContext::build(r4);
    RiccatiOptions opt1;
    opt1.context = &ctx1;
    RiccatiOptions opt4;
    opt4.context = &ctx4;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int trial = 0; trial < 200; ++trial) {
        const cplx lam(u(rng), u(rng));
        {
            const auto [ok, ac] = is_resolvent_alpha_only(r1, lam);
            const RiccatiOutcome out = solve_stabilizing({r1, lam}, opt1);
            REQUIRE((out.verdict == Verdict::Resolvent) == ok);
        }
        {
            const auto [ok, ac] = is_resolvent_alpha_only(r4, lam);
            const RiccatiOutcome out = solve_stabilizing({r4, lam}, opt4);
            REQUIRE((out.verdict == Verdict::Resolvent) == ok);
        }
    }
}

TEST_CASE("witness validity: every Resolvent outcome re-verifies") {
    std::mt19937_64 rng(0xBEEF);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const Realization r2 = examples::realization(2);
    const Realization r3 = examples::realization(3);
    RiccatiContext ctx2 = RiccatiContext::build(r2);
    RiccatiContext ctx3 = RiccatiContext::build(r3);
    for (int trial = 0; trial < 40; ++trial) {
        const cplx lam(u(rng), u(rng));
        for (int which = 0; which < 2; ++which) {
            const Realization& r = which == 0 ? r2 : r3;
            RiccatiOptions opt;
            opt.context = which == 0 ? &ctx2 : &ctx3;
            const RiccatiOutcome out = solve_stabilizing({r, lam}, opt);
            if (out.verdict != Verdict::Resolvent) continue;
            const auto [res, d] = riccati_residual({r, lam}, out.Q);
            REQUIRE(res.norm() < 1e-9 * (1.0 + out.Q.norm()));
            REQUIRE(spectral_radius(out.A_circ) < 1.0);
            REQUIRE(spectral_radius(out.alpha_circ) < 1.0);
            REQUIRE(condition_number(d) < 1e12);
        }
    }
}

TEST_CASE("scalar cross-check through the parametrization lambda = 2 - q - 2/q") {
    // q in the open left half of the disc |q-1| < 1 maps to resolvent points.
    const Realization r2 = examples::realization(2);
    RiccatiContext ctx = RiccatiContext::build(r2);
    RiccatiOptions opt;
    opt.context = &ctx;
    std::mt19937_64 rng(0x5ca1e);
    std::uniform_real_distribution<double> re(0.0, 1.0), im(-1.0, 1.0);
    int done = 0;
    while (done < 50) {
        const cplx q(re(rng), im(rng));
        if (std::abs(q - cplx(1.0)) >= 0.97 || q.real() >= 0.97 || std::abs(q) < 0.05)
            continue;
        const cplx lam = 2.0 - q - 2.0 / q;
        const RiccatiOutcome out = solve_stabilizing({r2, lam}, opt);
        REQUIRE(out.verdict == Verdict::Resolvent);
        ++done;
    }
    // Boundary samples (the semicircle part) must not come back Resolvent.
    for (int k = 1; k < 8; ++k) {
        const double phi = kPi / 2 + k * kPi / 8.0;
        const cplx q = cplx(1.0) + std::polar(1.0, phi);
        if (q.real() >= 1.0 || std::abs(q) < 1e-6) continue;
        const cplx lam = 2.0 - q - 2.0 / q;
        const RiccatiOutcome out = solve_stabilizing({r2, lam}, opt);
        CHECK(out.verdict != Verdict::Resolvent);
    }
}

TEST_CASE("conjugation symmetry for real-coefficient symbols") {
    const Realization r3 = examples::realization(3);
    RiccatiContext ctx = RiccatiContext::build(r3);
    RiccatiOptions opt;
    opt.context = &ctx;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int trial = 0; trial < 25; ++trial) {
        const cplx lam(u(rng), u(rng));
        const RiccatiOutcome a = solve_stabilizing({r3, lam}, opt);
        const RiccatiOutcome b = solve_stabilizing({r3, std::conj(lam)}, opt);
        REQUIRE(a.verdict == b.verdict);
    }
}
