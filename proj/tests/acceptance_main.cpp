// Acceptance suite: runs every reference criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <random>

#include "test_support.hpp"
#include "toepspec/example_checks.hpp"
#include "toepspec/toepspec.hpp"

using namespace toepspec;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

bool run_example(int id, const RunConfig& cfg, std::string& detail) {
    const ExampleReport rep = run_example_checks(id, cfg, /*emit_figures=*/false);
    bool pass = true;
    detail.clear();
    for (const CheckResult& c : rep.checks) {
        if (!c.pass) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += c.name + " (expected " + c.expected + ", observed " +
                      c.observed + ")";
        }
    }
    return pass;
}

bool property_round_trip() {
    std::mt19937_64 rng(0xACCE01);
    int done = 0;
    while (done < 100) {
        std::uniform_int_distribution<int> mdist(1, 2), ndist(1, 3);
        const int m = mdist(rng), n = ndist(rng);
        const auto eigs = testing::separated_eigenvalues(rng, n, true);
        const Mat f = testing::matrix_with_eigenvalues(rng, eigs);
        const Mat g = testing::random_complex_matrix(rng, n, m);
        const Mat h = testing::random_complex_matrix(rng, m, n);
        if (numerical_rank(controllability_matrix(f, g), 1e-9).rank != n) continue;
        if (numerical_rank(observability_matrix(h, f), 1e-9).rank != n) continue;
        std::vector<Mat> markov;
        Mat power = Mat::Identity(n, n);
        for (int j = 0; j < 2 * n + 2; ++j) {
            markov.push_back(h * power * g);
            power = f * power;
        }
        MinimalTriple t;
        try {
            t = minimal_from_coeffs(markov, m, 1e-9);
        } catch (const Error&) {
            return false;
        }
        if (t.state_dim() != n) return false;
        const auto rebuilt = t.markov(static_cast<int>(markov.size()));
        for (size_t j = 0; j < markov.size(); ++j)
            if ((rebuilt[j] - markov[j]).norm() >= 1e-8 * (1.0 + markov[j].norm()))
                return false;
        ++done;
    }
    return true;
}

bool property_two_descriptions() {
    for (int id = 1; id <= 5; ++id) {
        const Realization r = examples::realization(id);
        const PencilL pl = assemble_L(r);
        for (int k = 0; k < 256; ++k) {
            const double th = 2.0 * kPi * k / 256.0;
            EssPointsResult res;
            try {
                res = ess_points_at(pl, r, std::polar(1.0, th));
            } catch (const Error&) {
                return false;
            }
            if (res.singular || !res.nu_regular) continue;
            if (res.lambdas.size() != res.pencil_lambdas.size()) return false;
            if (matching_distance(res.lambdas, res.pencil_lambdas) >= 1e-6)
                return false;
        }
    }
    return true;
}

bool property_inversion_formula() {
    std::mt19937_64 rng(0xACCE03);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    for (int id = 1; id <= 5; ++id) {
        const Realization r = examples::realization(id);
        const PencilL pl = assemble_L(r);
        const Index m = r.m();
        int done = 0;
        while (done < 20) {
            const cplx z(u(rng), u(rng)), lam(u(rng), u(rng));
            const Mat l = pl.eval(lam, z);
            if (condition_number(l) > 1e8) continue;
            Mat omega;
            try {
                omega = eval_realization(r, z);
            } catch (const PoleHitError&) {
                continue;
            }
            const Mat target = omega - lam * Mat::Identity(m, m);
            if (condition_number(target) > 1e8) continue;
            const Mat linv = l.partialPivLu().solve(Mat::Identity(pl.size(), pl.size()));
            const Mat got = linv.bottomRightCorner(m, m);
            const Mat want = target.partialPivLu().solve(Mat::Identity(m, m));
            if ((got - want).norm() > 1e-7 * std::max(1.0, want.norm())) return false;
            ++done;
        }
    }
    return true;
}

bool property_rank_stabilization() {
    for (int id = 1; id <= 5; ++id) {
        const Realization r = examples::realization(id);
        const Index n = std::max(r.n_plus(), r.n_minus());
        const int kmax = 2 * static_cast<int>(n) + 2;
        const CoeffWindow cw = coeff_window(r, 2 * kmax - 1);
        HankelRankReport rep;
        try {
            rep = hankel_ranks(cw, kmax);
        } catch (const Error&) {
            return false;
        }
        if (rep.n_plus != r.n_plus() || rep.n_minus != r.n_minus()) return false;
        for (size_t k = 1; k < rep.ranks_plus.size(); ++k)
            if (rep.ranks_plus[k] < rep.ranks_plus[k - 1] ||
                rep.ranks_minus[k] < rep.ranks_minus[k - 1])
                return false;
        for (size_t k = static_cast<size_t>(rep.n_plus);
             k < rep.ranks_plus.size(); ++k)
            if (rep.ranks_plus[k] != rep.n_plus) return false;
        for (size_t k = static_cast<size_t>(rep.n_minus);
             k < rep.ranks_minus.size(); ++k)
            if (rep.ranks_minus[k] != rep.n_minus) return false;
    }
    return true;
}

bool property_toeplitz_consistency() {
    for (int id = 1; id <= 5; ++id) {
        const Realization r = examples::realization(id);
        const int m = static_cast<int>(r.m());
        const int N = 5;
        const CoeffWindow cw = coeff_window(r, N);
        const Mat trunc = toeplitz_truncation(cw, N);
        for (int n = 0; n < N; ++n)
            for (int k = 0; k < m; ++k) {
                MonomialImage img;
                try {
                    img = apply_symbol_to_monomial(r, n, Vec::Unit(m, k), N - 1);
                } catch (const Error&) {
                    return false;
                }
                for (int j = 0; j < N; ++j) {
                    const Vec got = img.coeffs[static_cast<size_t>(j)];
                    const Vec want = trunc.block(j * m, n * m + k, m, 1);
                    if ((got - want).norm() > 1e-12) return false;
                }
            }
    }
    return true;
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    const auto suite_start = clock::now();

    RunConfig cfg;
    cfg.n_theta = 720;
    cfg.grid_n = 400;

    std::string detail;

    bool p1 = run_example(1, cfg, detail);
    report(1, "example 1 line geometry at n_theta = 720", p1, detail);

    bool p2 = run_example(2, cfg, detail);
    report(2, "example 2 curve, witness at -2.5, and 50 q-samples", p2, detail);

    bool p3 = run_example(3, cfg, detail);
    report(3, "example 3 spectral radius, component labels, conjugation symmetry",
           p3, detail);

    bool p4 = run_example(4, cfg, detail);
    report(4, "example 4 determinant, empty E, sweep geometry, empty resolvent",
           p4, detail);

    bool p5 = run_example(5, cfg, detail);
    report(5, "example 5 exceptional point and whole-plane flag", p5, detail);

    {
        bool a = property_round_trip();
        bool b = property_two_descriptions();
        bool c = property_inversion_formula();
        bool d = property_rank_stabilization();
        bool e = property_toeplitz_consistency();
        const double seconds =
            std::chrono::duration<double>(clock::now() - suite_start).count();
        const bool in_time = seconds < 60.0;
        std::string sub;
        if (!a) sub += " round-trip";
        if (!b) sub += " two-descriptions";
        if (!c) sub += " inversion-formula";
        if (!d) sub += " rank-stabilization";
        if (!e) sub += " toeplitz-consistency";
        if (!in_time) sub += " runtime>=60s";
        report(6, "property suite (round trip, descriptions, inversion, ranks, "
                  "Toeplitz consistency, runtime)",
               a && b && c && d && e && in_time,
               sub.empty() ? "" : ("failed:" + sub));
    }

    const double total =
        std::chrono::duration<double>(clock::now() - suite_start).count();
    std::printf("%s: %d criteria failed (%.1f s total)\n",
                failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failures,
                total);
    return failures == 0 ? 0 : 1;
}
