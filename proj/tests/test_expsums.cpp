#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "prt/expsums.hpp"

using namespace prt;

namespace {
IntPoly P(const std::string& s) { return IntPoly::parse(s); }

CompleteSumSpec spec_x2(uint64_t q, long a) {
    CompleteSumSpec s;
    s.f = P("0,0,1");
    s.q = q;
    s.a = a;
    return s;
}
}  // namespace

TEST_CASE("complete_sum hand values") {
    // f=x^2, q=4, a=1: t in {1,3}, e(1/4)+e(9/4) = 2i
    cplx s4 = complete_sum(spec_x2(4, 1));
    CHECK(std::abs(s4 - cplx{0.0, 2.0}) < 1e-10);

    // q=2, a=1: single term e(1/2) = -1
    cplx s2 = complete_sum(spec_x2(2, 1));
    CHECK(std::abs(s2 - cplx{-1.0, 0.0}) < 1e-10);

    CHECK_THROWS_AS(complete_sum(spec_x2(4, 2)), std::invalid_argument);
}

TEST_CASE("complete_sum unit Gauss magnitude |G - 1| for odd primes") {
    PrimeTable pt = sieve_primes(200);
    for (uint64_t q : pt.primes) {
        if (q == 2) continue;
        cplx s = complete_sum(spec_x2(q, 1));
        // full Gauss sum G has |G| = sqrt(q); the unit-restricted sum is G-1
        cplx full = s + 1.0;
        CHECK(std::abs(std::abs(full) - std::sqrt(static_cast<double>(q))) < 1e-9);
        // brute force cross-check
        cplx brute{0, 0};
        for (uint64_t t = 1; t < q; ++t)
            brute += unit_phase(static_cast<double>(t * t % q) / static_cast<double>(q));
        CHECK(std::abs(s - brute) < 1e-9);
    }
}

TEST_CASE("complete_sum multiplicative factorization") {
    // S(q,a) = S(q1,A1) S(q2,A2) with a/q = A1/q1 + A2/q2, for the
    // unit-restricted sums with trivial progression.
    for (uint64_t q1 : {3ull, 4ull, 5ull, 7ull, 9ull}) {
        for (uint64_t q2 : {2ull, 5ull, 7ull, 11ull}) {
            if (std::gcd(q1, q2) != 1) continue;
            uint64_t q = q1 * q2;
            for (long a = 1; a < static_cast<long>(q); a += 3) {
                if (std::gcd(static_cast<uint64_t>(a), q) != 1) continue;
                // A1 = a * q2^{-1} mod q1, A2 = a * q1^{-1} mod q2
                auto inv = [](uint64_t x, uint64_t m) {
                    long long t0 = 0, t1 = 1;
                    long long r0 = m, r1 = x % m;
                    while (r1) {
                        long long qq = r0 / r1;
                        std::swap(t0 -= qq * t1, t1);
                        std::swap(r0 -= qq * r1, r1);
                    }
                    return static_cast<uint64_t>((t0 % (long long)m + (long long)m) % (long long)m);
                };
                uint64_t A1 = (a % q1) * inv(q2 % q1 == 0 ? 1 : q2, q1) % q1;
                uint64_t A2 = (a % q2) * inv(q1 % q2 == 0 ? 1 : q1, q2) % q2;
                if (q1 == 1) A1 = 0;
                cplx S = complete_sum(spec_x2(q, a));
                cplx S1 = complete_sum(spec_x2(q1, A1 == 0 ? 1 : A1));
                cplx S2 = complete_sum(spec_x2(q2, A2 == 0 ? 1 : A2));
                if (A1 == 0 || A2 == 0) continue;  // skip degenerate representatives
                CHECK(std::abs(S - S1 * S2) < 1e-8 * (1.0 + std::abs(S)));
            }
        }
    }
}

TEST_CASE("complete_sum with progressions matches a brute reference") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        CompleteSumSpec cs;
        unsigned deg = 1 + trial % 3;
        std::vector<mpz_class> coeffs(deg + 1);
        for (auto& c : coeffs) c = static_cast<long>(rng() % 21) - 10;
        if (coeffs.back() == 0) coeffs.back() = 1;
        cs.f = IntPoly(coeffs);
        cs.q = 2 + rng() % 30;
        do {
            cs.a = 1 + static_cast<long>(rng() % (cs.q - 1 ? cs.q - 1 : 1));
        } while (std::gcd(static_cast<uint64_t>(cs.a.get_ui()), cs.q) != 1);
        cs.m = 1 + static_cast<long>(rng() % 5);
        do {
            cs.b = static_cast<long>(rng() % (cs.m.get_ui() * 3 + 1));
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), cs.b.get_mpz_t(), cs.m.get_mpz_t());
            if (g == 1) break;
        } while (true);
        cs.Q = 1;
        cplx fast = complete_sum(cs);
        // brute reference: direct definition over t mod mq
        cplx brute{0, 0};
        mpz_class mq = cs.m * cs.q;
        for (mpz_class t = 0; t < mq; ++t) {
            mpz_class gq, diff = (t - cs.b) % cs.m;
            mpz_gcd(gq.get_mpz_t(), t.get_mpz_t(), mpz_class(cs.q).get_mpz_t());
            if (gq != 1 || diff != 0) continue;
            mpz_class ph = (cs.a * cs.f(t)) % mpz_class(cs.q);
            if (ph < 0) ph += cs.q;
            brute += unit_phase(ph.get_d() / static_cast<double>(cs.q));
        }
        CHECK(std::abs(fast - brute) < 1e-9 * (1 + std::abs(brute)));
    }
}

TEST_CASE("restricted_complete_sum examples") {
    // g=x^2, W=1, b=0, q=3, a=1: l in {1,2} -> 2 e(1/3)
    cplx s = restricted_complete_sum(P("0,0,1"), 1, 0, 3, 1);
    CHECK(std::abs(s - 2.0 * unit_phase(1.0 / 3.0)) < 1e-10);

    // q=1: single l=0 term, empty coprimality condition
    cplx s1 = restricted_complete_sum(P("0,0,1"), 1, 0, 1, 1);
    CHECK(std::abs(s1 - cplx{1.0, 0.0}) < 1e-12);

    // g=x^3, W=2, b=1, q=5, a=2: frozen against an independent evaluation
    cplx s5 = restricted_complete_sum(P("0,0,0,1"), 2, 1, 5, 2);
    CHECK(s5.real() == doctest::Approx(-0.3090169943749477).epsilon(1e-9));
    CHECK(s5.imag() == doctest::Approx(-0.9510565162951534).epsilon(1e-9));
}

TEST_CASE("verify_rice_bound: x^2 stays small") {
    double c = verify_rice_bound(P("0,0,1"), 500, 2, 42);
    CHECK(c <= 2.0);
    CHECK(c >= 1.0);
}

TEST_CASE("classify_arc") {
    ArcParams ap = ArcParams::with_sigma(2, 1e6, 1e-5);
    CHECK(ap.Cd() == doctest::Approx(65536.0 * 1e-5));

    auto zero = classify_arc(0.0, ap);
    CHECK(zero.major);
    CHECK(zero.q == 1);
    CHECK(zero.a == 0);

    auto half = classify_arc(0.5, ap);
    CHECK(half.major);
    CHECK(half.q == 2);
    CHECK(half.a == 1);

    // golden ratio: worst approximable, threshold (log X)^(2Cd) ~ 5.6 < X^(1/3)
    double golden = (1.0 + std::sqrt(5.0)) / 2.0 - 1.0;
    auto g = classify_arc(golden, ap);
    CHECK_FALSE(g.major);

    // dichotomy: every alpha exactly one of major/minor is structural (bool);
    // spot check a rational with small denominator
    auto third = classify_arc(1.0 / 3.0, ap);
    CHECK(third.major);
    CHECK(third.q == 3);

    // default sigma makes the threshold astronomically large: q=1 wins
    ArcParams dflt = ArcParams::make(2, 1e6);
    auto any = classify_arc(golden, dflt);
    CHECK(any.major);
    CHECK(any.q == 1);
}

TEST_CASE("prime_weyl_sum at theta 0") {
    PrimeTable pt = sieve_primes(10000);
    // theta(1e4) = sum of log p (frozen via independent enumeration)
    WeylSpec ws;
    ws.h = P("0,0,1");
    ws.theta = 0.0;
    ws.P = 10000;
    ws.b = 0;
    ws.subtract_fb = false;
    ws.weight = WeylWeight::Log;
    cplx cheb = prime_weyl_sum(ws, pt);
    CHECK(cheb.imag() == doctest::Approx(0.0));
    CHECK(cheb.real() == doctest::Approx(9895.9913791569873).epsilon(1e-10));

    // count of primes = 3 mod 4 up to 1e3
    WeylSpec cnt;
    cnt.h = P("0,0,1");
    cnt.theta = 0.0;
    cnt.P = 1000;
    cnt.m = 4;
    cnt.b = 3;
    cnt.subtract_fb = false;
    cnt.weight = WeylWeight::Unit;
    cplx c = prime_weyl_sum(cnt, pt);
    CHECK(c.real() == doctest::Approx(87.0));

    // empty range P < 2 -> 0
    WeylSpec e = cnt;
    e.P = 1;
    cplx none = prime_weyl_sum(e, sieve_primes(2));
    CHECK(none == cplx{0.0, 0.0});
    e.P = 2;
    e.m = 1;
    e.b = 0;
    cplx tiny = prime_weyl_sum(e, pt);
    CHECK(tiny.real() == doctest::Approx(1.0));  // just p=2
}

TEST_CASE("oscillatory_integral") {
    // beta=0, G=1 -> P-2
    cplx i1 = oscillatory_integral(P("0,0,1"), nullptr, 1, 0.0, 1000.0);
    CHECK(i1.real() == doctest::Approx(998.0).epsilon(1e-9));
    CHECK(i1.imag() == doctest::Approx(0.0));

    // beta=0, G=h' for h=x^2 -> P^2-4
    IntPoly d = P("0,0,1").derivative();
    cplx i2 = oscillatory_integral(P("0,0,1"), &d, 1, 0.0, 1000.0);
    CHECK(i2.real() == doctest::Approx(1000.0 * 1000.0 - 4.0).epsilon(1e-9));

    // refinement consistency at beta != 0
    cplx a = oscillatory_integral(P("0,0,1"), nullptr, 1, 1e-6, 1000.0);
    cplx b = oscillatory_integral(P("0,0,1"), nullptr, 1, 1e-6, 1000.0);
    CHECK(std::abs(a - b) < 1e-9);  // deterministic
    // analytic cross-check via fine Riemann sum
    cplx ref{0, 0};
    int N = 400000;
    for (int i = 0; i < N; ++i) {
        double t = 2.0 + (998.0 * (i + 0.5)) / N;
        ref += unit_phase(std::fmod(1e-6 * t * t, 1.0)) * (998.0 / N);
    }
    CHECK(std::abs(a - ref) < 1e-3 * std::abs(ref));
}

TEST_CASE("major_arc_prediction matches direct sum at small scale") {
    PrimeTable pt = sieve_primes(200000);
    // h=x^2, m=1, q=3, a=1, theta=1/3, P=2e5
    WeylSpec ws;
    ws.h = P("0,0,1");
    ws.theta = 1.0 / 3.0;
    ws.P = 200000;
    ws.m = 1;
    ws.b = 0;
    ws.weight = WeylWeight::Log;
    cplx direct = prime_weyl_sum(ws, pt);
    cplx pred = major_arc_prediction(ws, 3, 1);
    CHECK(std::abs(direct - pred) / std::abs(pred) < 0.05);

    // q=1: Chebyshev-like total
    WeylSpec w0 = ws;
    w0.theta = 0.0;
    cplx direct0 = prime_weyl_sum(w0, pt);
    cplx pred0 = major_arc_prediction(w0, 1, 0);
    CHECK(std::abs(direct0 - pred0) / std::abs(pred0) < 0.05);
}

TEST_CASE("minor-arc smallness is observed (reported, not asserted)") {
    // Sampled minor phases give normalized prime Weyl sums at least an order
    // of magnitude below the alpha = 0 value at desk scale. The constant is
    // unspecified upstream, so the factor is recorded as a measurement.
    PrimeTable pt = sieve_primes(1000000);
    WeylSpec base;
    base.h = P("0,0,1");
    base.theta = 0.0;
    base.P = 1000000;
    base.m = 1;
    base.b = 0;
    base.weight = WeylWeight::Log;
    double at_zero = std::abs(prime_weyl_sum(base, pt));

    ArcParams ap = ArcParams::with_sigma(2, 1e6, 1e-5);
    double worst_minor = 0.0;
    for (double alpha : {0.6180339887498949, 0.41421356237309515, 0.7390851332151607}) {
        REQUIRE_FALSE(classify_arc(alpha, ap).major);
        WeylSpec ws = base;
        ws.theta = alpha;
        worst_minor = std::max(worst_minor, std::abs(prime_weyl_sum(ws, pt)));
    }
    CHECK(worst_minor > 0.0);
    double factor = at_zero / worst_minor;
    MESSAGE("minor/major suppression factor at P=1e6: ", factor);
    WARN(factor >= 10.0);
}

TEST_CASE("frac_scaled exactness") {
    // theta = 0.5 exactly: frac(0.5 * n) alternates 0, 0.5
    CHECK(frac_scaled(0.5, 4, 1) == 0.0);
    CHECK(frac_scaled(0.5, 5, 1) == 0.5);
    // denominator scaling: frac(theta * 10 / 5)
    CHECK(frac_scaled(0.25, 10, 5) == 0.5);
    // huge n stays exact: 2^-20 * (2^40 + 1) has frac 2^-20
    mpz_class big = (mpz_class(1) << 40) + 1;
    CHECK(frac_scaled(std::ldexp(1.0, -20), big, 1) == doctest::Approx(std::ldexp(1.0, -20)));
}
